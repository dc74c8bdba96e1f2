#include "pifolab/chain.hpp"

#include <cmath>
#include <stdexcept>

namespace pifo {

bool bmatrix_spec_valid(const BMatrixSpec& spec) {
  const double r2 = std::sqrt(2.0) + 1e-12;
  return spec.m >= 1 && spec.omega >= 0.0 && spec.omega <= r2 && spec.zeta >= 0.0 &&
         spec.zeta <= r2;
}

Mat make_b_matrix(const BMatrixSpec& spec) {
  const int m = spec.m;
  Mat B = Mat::Zero(m + 1, m);
  B(0, 0) = spec.omega;
  for (int l = 1; l < m; ++l) {
    B(l, l - 1) = 1.0;
    B(l, l) = -1.0;
  }
  B(m, m - 1) = spec.zeta;
  return B;
}

Vec row_b(int l, const BMatrixSpec& spec) {
  if (l < 0 || l > spec.m) throw std::out_of_range("row_b: index out of range");
  Vec r = Vec::Zero(spec.m);
  add_row(l, spec, 1.0, r);
  return r;
}

double row_dot(int l, const BMatrixSpec& spec, const Vec& x) {
  if (l == 0) return spec.omega * x[0];
  if (l == spec.m) return spec.zeta * x[spec.m - 1];
  return x[l - 1] - x[l];
}

double row_sqnorm(int l, const BMatrixSpec& spec) {
  if (l == 0) return spec.omega * spec.omega;
  if (l == spec.m) return spec.zeta * spec.zeta;
  return 2.0;
}

void add_row(int l, const BMatrixSpec& spec, double coef, Vec& y) {
  if (l == 0) {
    y[0] += coef * spec.omega;
  } else if (l == spec.m) {
    y[spec.m - 1] += coef * spec.zeta;
  } else {
    y[l - 1] += coef;
    y[l] -= coef;
  }
}

IndexPartition partition_indices(int m, int n) {
  if (n < 2) throw std::invalid_argument("partition_indices: need n >= 2");
  if (m < 1) throw std::invalid_argument("partition_indices: need m >= 1");
  IndexPartition p;
  p.n = n;
  p.m = m;
  p.sets.resize(n);
  for (int l = 0; l <= m; ++l) p.sets[l % n].push_back(l);
  return p;
}

std::vector<int> residue_class(int m, int n, int i) {
  std::vector<int> out;
  for (int l = (i - 1) % n; l <= m; l += n) out.push_back(l);
  return out;
}

SubspaceIndex subspace_index(const Vec& v, double tol) {
  int k = static_cast<int>(v.size());
  while (k > 0 && std::abs(v[k - 1]) <= tol) --k;
  return SubspaceIndex{k};
}

const char* kind_name(Kind k) {
  switch (k) {
    case Kind::BILINEAR_BASE: return "bilinear_base";
    case Kind::NONCONVEX_BASE: return "nonconvex_base";
    case Kind::QUAD_BASE: return "quad_base";
    case Kind::SCSC: return "scsc";
    case Kind::CSC: return "csc";
    case Kind::CC: return "cc";
    case Kind::NCSC: return "ncsc";
    case Kind::NCSC_AVG: return "ncsc_avg";
    case Kind::SC: return "sc";
    case Kind::C: return "c";
    case Kind::NC: return "nc";
    case Kind::NC_AVG: return "nc_avg";
    case Kind::SEP_SCSC: return "sep_scsc";
    case Kind::SEP_CSC: return "sep_csc";
    case Kind::SEP_CSC_XQUAD: return "sep_csc_xquad";
    case Kind::ONE_D_SCSC: return "one_d_scsc";
    case Kind::ONE_D_CC: return "one_d_cc";
    case Kind::ONE_D_SC: return "one_d_sc";
  }
  return "unknown";
}

Kind kind_from_name(const std::string& name) {
  static const Kind all[] = {
      Kind::BILINEAR_BASE, Kind::NONCONVEX_BASE, Kind::QUAD_BASE, Kind::SCSC,
      Kind::CSC,           Kind::CC,             Kind::NCSC,      Kind::NCSC_AVG,
      Kind::SC,            Kind::C,              Kind::NC,        Kind::NC_AVG,
      Kind::SEP_SCSC,      Kind::SEP_CSC,        Kind::SEP_CSC_XQUAD,
      Kind::ONE_D_SCSC,    Kind::ONE_D_CC,       Kind::ONE_D_SC};
  for (Kind k : all)
    if (name == kind_name(k)) return k;
  throw std::invalid_argument("unknown instance kind: " + name);
}

}  // namespace pifo
