#ifndef PIFOLAB_CHAIN_HPP
#define PIFOLAB_CHAIN_HPP

#include <vector>

#include "pifolab/types.hpp"

namespace pifo {

/// Describes the (m+1) x m chain matrix whose rows are
///   row 0:     omega * e_1'
///   row l:     e_l' - e_{l+1}',   1 <= l <= m-1
///   row m:     zeta * e_m'
/// Only row actions are ever used inside oracles; the dense form exists for
/// tests and brute-force checks.
struct BMatrixSpec {
  int m = 1;
  double omega = 0.0;
  double zeta = 0.0;
};

bool bmatrix_spec_valid(const BMatrixSpec& spec);

/// Dense (m+1) x m chain matrix.  Test/brute-force use only.
Mat make_b_matrix(const BMatrixSpec& spec);

/// Row l (0-based, 0 <= l <= m) of the chain matrix as a dense vector.
Vec row_b(int l, const BMatrixSpec& spec);

/// b_l' x without materializing the row.
double row_dot(int l, const BMatrixSpec& spec, const Vec& x);

/// squared norm of row l.
double row_sqnorm(int l, const BMatrixSpec& spec);

/// y += coef * b_l (scatter of the row into a vector).
void add_row(int l, const BMatrixSpec& spec, double coef, Vec& y);

/// Residue-class partition of the row indices {0, ..., m}:
/// set i holds every l with l == i-1 (mod n).
struct IndexPartition {
  int n = 2;
  int m = 1;
  std::vector<std::vector<int>> sets;  // sets[i-1] = sorted members of class i
};

IndexPartition partition_indices(int m, int n);

/// Members of residue class i (1-based) without building the partition.
std::vector<int> residue_class(int m, int n, int i);

/// True when row index l belongs to class i, i.e. l == i-1 (mod n).
inline bool in_class(int l, int n, int i) { return l % n == (i - 1) % n; }

struct SubspaceIndex {
  int k = 0;
};

/// Smallest k such that every coordinate with index > k (1-based) is within
/// tol of zero.  k = 0 means the zero vector.
SubspaceIndex subspace_index(const Vec& v, double tol = 0.0);

}  // namespace pifo

#endif
