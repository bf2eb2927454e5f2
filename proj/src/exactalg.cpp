/*
 * exactalg.cpp
 *
 * Implementation of the exact linear-algebra kernel.
 */
#include "exactalg.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace diocal {

std::string rat_str(const Rat& r) {
  std::ostringstream out;
  out << numerator(r);
  if (denominator(r) != 1) out << "/" << denominator(r);
  return out.str();
}

Rat rat_parse(const std::string& s) {
  auto slash = s.find('/');
  try {
    if (slash == std::string::npos)
      return Rat(boost::multiprecision::cpp_int(s));
    boost::multiprecision::cpp_int num(s.substr(0, slash));
    boost::multiprecision::cpp_int den(s.substr(slash + 1));
    if (den == 0) throw invalid_input("rational with zero denominator: " + s);
    return Rat(num, den);
  } catch (const std::runtime_error& e) {
    throw invalid_input("cannot parse rational '" + s + "'");
  }
}

GradedSpace::GradedSpace(std::vector<std::pair<std::string, int>> b)
    : basis(std::move(b)) {
  std::set<std::string> seen;
  for (const auto& [label, deg] : basis) {
    (void)deg;
    if (!seen.insert(label).second)
      throw invalid_input("duplicate basis label '" + label + "'");
  }
}

int GradedSpace::index_of(const std::string& label) const {
  for (int i = 0; i < dim(); ++i)
    if (basis[i].first == label) return i;
  return -1;
}

GradedSpace GradedSpace::shifted(int p) const {
  GradedSpace out;
  out.basis = basis;
  for (auto& [label, deg] : out.basis) {
    (void)label;
    deg -= p;
  }
  return out;
}

SignedMatrix SignedMatrix::identity(int n) {
  SignedMatrix m(n, n);
  for (int i = 0; i < n; ++i) m.entries[{i, i}] = 1;
  return m;
}

const Rat& SignedMatrix::get(int r, int c) const {
  static const Rat zero = 0;
  auto it = entries.find({r, c});
  return it == entries.end() ? zero : it->second;
}

void SignedMatrix::set(int r, int c, const Rat& v) {
  if (r < 0 || r >= rows || c < 0 || c >= cols)
    throw invalid_input("matrix index out of range");
  if (v == 0)
    entries.erase({r, c});
  else
    entries[{r, c}] = v;
}

void SignedMatrix::add(int r, int c, const Rat& v) { set(r, c, get(r, c) + v); }

SignedMatrix SignedMatrix::transpose() const {
  SignedMatrix out(cols, rows);
  for (const auto& [rc, v] : entries) out.entries[{rc.second, rc.first}] = v;
  return out;
}

SignedMatrix SignedMatrix::mul(const SignedMatrix& other) const {
  if (cols != other.rows) throw invalid_input("matrix shape mismatch in mul");
  SignedMatrix out(rows, other.cols);
  for (const auto& [rc, v] : entries) {
    auto lo = other.entries.lower_bound({rc.second, 0});
    auto hi = other.entries.upper_bound({rc.second, other.cols});
    for (auto it = lo; it != hi; ++it)
      out.add(rc.first, it->first.second, v * it->second);
  }
  return out;
}

Vec SignedMatrix::apply(const Vec& v) const {
  if (static_cast<int>(v.size()) != cols)
    throw invalid_input("vector length mismatch in apply");
  Vec out(rows, Rat(0));
  for (const auto& [rc, e] : entries) out[rc.first] += e * v[rc.second];
  return out;
}

bool SignedMatrix::operator==(const SignedMatrix& other) const {
  return rows == other.rows && cols == other.cols && entries == other.entries;
}

int koszul_sign(const std::vector<int>& perm,
                const std::vector<int>& degrees) {
  const int n = static_cast<int>(perm.size());
  if (static_cast<int>(degrees.size()) != n)
    throw invalid_input("koszul_sign: permutation/degree length mismatch");
  std::vector<bool> seen(n, false);
  for (int p : perm) {
    if (p < 1 || p > n || seen[p - 1])
      throw invalid_input("koszul_sign: not a bijection on {1..n}");
    seen[p - 1] = true;
  }
  int sign = 1;
  for (int k = 0; k < n; ++k)
    for (int l = k + 1; l < n; ++l)
      if (perm[k] > perm[l] && (degrees[perm[k] - 1] & 1) &&
          (degrees[perm[l] - 1] & 1))
        sign = -sign;
  return sign;
}

namespace {

/* Dense copy; desk-scale slots keep this cheap. */
std::vector<Vec> dense_rows(const SignedMatrix& m) {
  std::vector<Vec> rows(m.rows, Vec(m.cols, Rat(0)));
  for (const auto& [rc, v] : m.entries) rows[rc.first][rc.second] = v;
  return rows;
}

}  // namespace

RankKernel rank_kernel(const SignedMatrix& m) {
  std::vector<Vec> rows = dense_rows(m);
  std::vector<int> pivot_col_of_row;
  int rank = 0;
  for (int col = 0; col < m.cols && rank < m.rows; ++col) {
    int pivot = -1;
    for (int r = rank; r < m.rows; ++r)
      if (rows[r][col] != 0) {
        pivot = r;
        break;
      }
    if (pivot < 0) continue;
    std::swap(rows[rank], rows[pivot]);
    const Rat inv = Rat(1) / rows[rank][col];
    for (int c = col; c < m.cols; ++c) rows[rank][c] *= inv;
    for (int r = 0; r < m.rows; ++r) {
      if (r == rank || rows[r][col] == 0) continue;
      const Rat f = rows[r][col];
      for (int c = col; c < m.cols; ++c) rows[r][c] -= f * rows[rank][c];
    }
    pivot_col_of_row.push_back(col);
    ++rank;
  }

  RankKernel out;
  out.rank = rank;
  std::vector<int> pivot_row_of_col(m.cols, -1);
  for (int r = 0; r < rank; ++r) pivot_row_of_col[pivot_col_of_row[r]] = r;
  for (int col = 0; col < m.cols; ++col) {
    if (pivot_row_of_col[col] >= 0) continue;
    Vec k(m.cols, Rat(0));
    k[col] = 1;
    for (int c = 0; c < m.cols; ++c)
      if (pivot_row_of_col[c] >= 0) k[c] = -rows[pivot_row_of_col[c]][col];
    out.kernel.push_back(std::move(k));
  }
  return out;
}

std::vector<Vec> annihilator(const std::vector<Vec>& subspace, int ambient_dim,
                             const SignedMatrix& pairing) {
  if (pairing.rows != ambient_dim || pairing.cols != ambient_dim)
    throw invalid_input("annihilator: pairing must be square on the ambient");
  if (rank_kernel(pairing).rank != ambient_dim)
    throw invalid_input("annihilator: degenerate pairing");
  /* f annihilates v iff f . (pairing v) = 0; stack the paired vectors. */
  SignedMatrix system(static_cast<int>(subspace.size()), ambient_dim);
  for (int r = 0; r < static_cast<int>(subspace.size()); ++r) {
    if (static_cast<int>(subspace[r].size()) != ambient_dim)
      throw invalid_input("annihilator: subspace vector of wrong length");
    Vec paired = pairing.apply(subspace[r]);
    for (int c = 0; c < ambient_dim; ++c)
      if (paired[c] != 0) system.set(r, c, paired[c]);
  }
  return rank_kernel(system).kernel;
}

bool EchelonSpan::insert(Vec v) {
  v = reduce(std::move(v));
  int lead = -1;
  for (int i = 0; i < ambient_; ++i)
    if (v[i] != 0) {
      lead = i;
      break;
    }
  if (lead < 0) return false;
  const Rat inv = Rat(1) / v[lead];
  for (auto& x : v) x *= inv;
  for (auto& row : rows_)
    if (row[lead] != 0) {
      const Rat f = row[lead];
      for (int i = 0; i < ambient_; ++i) row[i] -= f * v[i];
    }
  auto pos = std::lower_bound(pivots_.begin(), pivots_.end(), lead);
  auto idx = pos - pivots_.begin();
  pivots_.insert(pos, lead);
  rows_.insert(rows_.begin() + idx, std::move(v));
  return true;
}

Vec EchelonSpan::reduce(Vec v) const {
  if (static_cast<int>(v.size()) != ambient_)
    throw invalid_input("EchelonSpan: vector length mismatch");
  for (size_t r = 0; r < rows_.size(); ++r) {
    const Rat& f = v[pivots_[r]];
    if (f == 0) continue;
    const Rat factor = f;
    for (int i = 0; i < ambient_; ++i) v[i] -= factor * rows_[r][i];
  }
  return v;
}

bool EchelonSpan::contains(const Vec& v) const {
  Vec r = reduce(v);
  return std::all_of(r.begin(), r.end(), [](const Rat& x) { return x == 0; });
}

std::vector<int> EchelonSpan::free_columns() const {
  std::vector<int> out;
  size_t p = 0;
  for (int i = 0; i < ambient_; ++i) {
    if (p < pivots_.size() && pivots_[p] == i)
      ++p;
    else
      out.push_back(i);
  }
  return out;
}

bool same_span(const std::vector<Vec>& a, const std::vector<Vec>& b,
               int ambient) {
  EchelonSpan sa(ambient), sb(ambient);
  for (const auto& v : a) sa.insert(v);
  for (const auto& v : b) sb.insert(v);
  if (sa.rank() != sb.rank()) return false;
  for (const auto& v : a)
    if (!sb.contains(v)) return false;
  return true;
}

}  // namespace diocal
