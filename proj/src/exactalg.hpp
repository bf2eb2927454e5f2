/*
 * exactalg.hpp
 *
 * Exact rational scalars, graded vector spaces, signed sparse matrices,
 * Koszul signs, and the linear-algebra kernel (rank, kernel, annihilator,
 * echelon spans) used by every other module.
 *
 * Degrees are cohomological integers; a shift [p] subtracts p from every
 * basis degree. All arithmetic is exact; no floating point anywhere.
 */
#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace diocal {

using Rat = boost::multiprecision::cpp_rational;
using Vec = std::vector<Rat>;

/* Raised when an operation's precondition is violated. */
struct invalid_input : std::runtime_error {
  explicit invalid_input(const std::string& what) : std::runtime_error(what) {}
};

/* Raised when a bounded arity window cannot saturate a computation. */
struct window_insufficient : std::runtime_error {
  explicit window_insufficient(const std::string& what)
      : std::runtime_error(what) {}
};

std::string rat_str(const Rat& r);
Rat rat_parse(const std::string& s);

/* Finite-dimensional graded space: ordered basis of (label, degree). */
struct GradedSpace {
  std::vector<std::pair<std::string, int>> basis;

  GradedSpace() = default;
  explicit GradedSpace(std::vector<std::pair<std::string, int>> b);

  int dim() const { return static_cast<int>(basis.size()); }
  int degree(int i) const { return basis.at(i).second; }
  const std::string& label(int i) const { return basis.at(i).first; }
  int index_of(const std::string& label) const;  // -1 if absent

  GradedSpace shifted(int p) const;  // [p]: degree -> degree - p
};

/* Sparse exact matrix; no zero entries are ever stored. */
struct SignedMatrix {
  int rows = 0;
  int cols = 0;
  std::map<std::pair<int, int>, Rat> entries;

  SignedMatrix() = default;
  SignedMatrix(int r, int c) : rows(r), cols(c) {}

  static SignedMatrix identity(int n);

  const Rat& get(int r, int c) const;
  void set(int r, int c, const Rat& v);
  void add(int r, int c, const Rat& v);

  SignedMatrix transpose() const;
  SignedMatrix mul(const SignedMatrix& other) const;
  Vec apply(const Vec& v) const;
  bool is_zero() const { return entries.empty(); }
  bool operator==(const SignedMatrix& other) const;
};

/*
 * Sign accumulated when reordering homogeneous factors (x_1, ..., x_n)
 * into (x_{p1}, ..., x_{pn}): each crossing of two factors of odd degree
 * contributes -1. `perm` is one-line notation on {1..n}; `degrees[i-1]`
 * is the degree of x_i.
 */
int koszul_sign(const std::vector<int>& perm, const std::vector<int>& degrees);

/* Exact Gaussian elimination: rank and a basis of the right kernel. */
struct RankKernel {
  int rank = 0;
  std::vector<Vec> kernel;
};
RankKernel rank_kernel(const SignedMatrix& m);

/*
 * Basis of {f : <f, v> = 0 for all v in the subspace}, with
 * <f, v> = sum_ij f_i pairing(i,j) v_j. The pairing must be square and
 * nondegenerate on the ambient space.
 */
std::vector<Vec> annihilator(const std::vector<Vec>& subspace, int ambient_dim,
                             const SignedMatrix& pairing);

/*
 * Incrementally maintained reduced row echelon span. insert() returns
 * true when the vector enlarged the span; reduce() returns the canonical
 * residual modulo the span (zero iff the vector lies inside).
 */
class EchelonSpan {
 public:
  explicit EchelonSpan(int ambient) : ambient_(ambient) {}

  int ambient() const { return ambient_; }
  int rank() const { return static_cast<int>(rows_.size()); }
  bool insert(Vec v);
  Vec reduce(Vec v) const;
  bool contains(const Vec& v) const;
  const std::vector<Vec>& rows() const { return rows_; }
  const std::vector<int>& pivots() const { return pivots_; }
  /* Ambient indices that are not pivot columns, in increasing order. */
  std::vector<int> free_columns() const;

 private:
  int ambient_;
  std::vector<Vec> rows_;    // reduced echelon rows, pivot entry = 1
  std::vector<int> pivots_;  // pivot column of each row, increasing
};

bool same_span(const std::vector<Vec>& a, const std::vector<Vec>& b,
               int ambient);

}  // namespace diocal
