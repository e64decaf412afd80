#include "sectional/linalg.hpp"

#include <algorithm>
#include <utility>

namespace sectional {

  namespace {
    using IntMatrix = std::vector<std::vector<BigInt>>;

    BigInt mod_floor(BigInt const& a, BigInt const& n) {
      BigInt r = a % n;
      if (r < 0) {
        r += n;
      }
      return r;
    }

    BigInt abs_big(BigInt const& a) {
      return a < 0 ? BigInt(-a) : a;
    }

    IntMatrix identity_int(std::size_t n) {
      IntMatrix m(n, std::vector<BigInt>(n));
      for (std::size_t i = 0; i < n; ++i) {
        m[i][i] = 1;
      }
      return m;
    }

    void require_linear_algebra(Ring const& ring) {
      if (!ring.supports_linear_algebra()) {
        throw CapabilityError("linear algebra is not available over " + ring.describe());
      }
    }

    IntMatrix lift(Matrix const& m, Ring const& ring) {
      IntMatrix a(m.rows, std::vector<BigInt>(m.cols));
      for (std::size_t i = 0; i < m.rows; ++i) {
        for (std::size_t j = 0; j < m.cols; ++j) {
          a[i][j] = ring.lift(m.at(i, j));
        }
      }
      return a;
    }

    // Reduces an integer vector into the ring's canonical range.
    Vector to_ring(Ring const& ring, std::vector<BigInt> const& v) {
      Vector out(v.size());
      for (std::size_t i = 0; i < v.size(); ++i) {
        out[i] = ring.kind() == RingKind::integers_mod ? Scalar(mod_floor(v[i], ring.modulus()))
                                                       : Scalar(v[i]);
      }
      return out;
    }

    LinearSolution solve_field(Matrix const& m, Ring const& ring) {
      Matrix                   a = m;
      std::vector<std::size_t> pivots;
      std::size_t              row = 0;
      for (std::size_t col = 0; col < a.cols && row < a.rows; ++col) {
        std::size_t p = row;
        while (p < a.rows && ring.is_zero(a.at(p, col))) {
          ++p;
        }
        if (p == a.rows) {
          continue;
        }
        for (std::size_t j = 0; j < a.cols; ++j) {
          std::swap(a.at(p, j), a.at(row, j));
        }
        Scalar const inv = ring.inv(a.at(row, col));
        for (std::size_t j = 0; j < a.cols; ++j) {
          a.at(row, j) = ring.mul(inv, a.at(row, j));
        }
        for (std::size_t i = 0; i < a.rows; ++i) {
          if (i == row || ring.is_zero(a.at(i, col))) {
            continue;
          }
          Scalar const f = a.at(i, col);
          for (std::size_t j = 0; j < a.cols; ++j) {
            a.at(i, j) = ring.sub(a.at(i, j), ring.mul(f, a.at(row, j)));
          }
        }
        pivots.push_back(col);
        ++row;
      }

      LinearSolution out;
      out.rank = pivots.size();
      for (std::size_t c : pivots) {
        out.image.push_back(m.column(c));
      }
      std::vector<bool> is_pivot(a.cols, false);
      for (std::size_t c : pivots) {
        is_pivot[c] = true;
      }
      for (std::size_t f = 0; f < a.cols; ++f) {
        if (is_pivot[f]) {
          continue;
        }
        Vector k(a.cols);
        k[f] = ring.one();
        for (std::size_t r = 0; r < pivots.size(); ++r) {
          k[pivots[r]] = ring.neg(a.at(r, f));
        }
        out.kernel.push_back(std::move(k));
      }
      return out;
    }

    LinearSolution solve_smith(Matrix const& m, Ring const& ring) {
      SmithForm const s     = smith_normal_form(lift(m, ring), m.cols);
      bool const      mod_n = ring.kind() == RingKind::integers_mod;
      BigInt const    n     = ring.modulus();

      LinearSolution out;
      out.invariant_factors = s.diagonal;
      for (std::size_t i = 0; i < m.cols; ++i) {
        BigInt mult = 1;
        if (i < s.diagonal.size()) {
          BigInt const& d = s.diagonal[i];
          if (mod_n) {
            BigInt const g = boost::multiprecision::gcd(d, n);
            if (g == 1) {
              continue;
            }
            mult = n / g;
          } else if (d != 0) {
            continue;
          }
        }
        std::vector<BigInt> col(m.cols);
        for (std::size_t r = 0; r < m.cols; ++r) {
          col[r] = s.v[r][i] * mult;
        }
        Vector k = to_ring(ring, col);
        if (!is_zero_vector(k)) {
          out.kernel.push_back(std::move(k));
        }
      }
      for (std::size_t i = 0; i < s.diagonal.size(); ++i) {
        std::vector<BigInt> col(m.rows);
        for (std::size_t r = 0; r < m.rows; ++r) {
          col[r] = s.u_inv[r][i] * s.diagonal[i];
        }
        Vector g = to_ring(ring, col);
        if (!is_zero_vector(g)) {
          out.image.push_back(std::move(g));
          ++out.rank;
        }
      }
      return out;
    }
  }  // namespace

  Matrix Matrix::identity(Ring const& ring, std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
      m.at(i, i) = ring.one();
    }
    return m;
  }

  Matrix Matrix::from_columns(std::size_t rows, std::vector<Vector> const& columns) {
    Matrix m(rows, columns.size());
    for (std::size_t j = 0; j < columns.size(); ++j) {
      for (std::size_t i = 0; i < rows; ++i) {
        m.at(i, j) = columns[j][i];
      }
    }
    return m;
  }

  Vector Matrix::column(std::size_t j) const {
    Vector v(rows);
    for (std::size_t i = 0; i < rows; ++i) {
      v[i] = at(i, j);
    }
    return v;
  }

  Vector Matrix::apply(Ring const& ring, Vector const& v) const {
    Vector out(rows);
    for (std::size_t i = 0; i < rows; ++i) {
      for (std::size_t j = 0; j < cols; ++j) {
        if (!ring.is_zero(v[j])) {
          ring.fma(out[i], at(i, j), v[j]);
        }
      }
    }
    return out;
  }

  Matrix Matrix::multiply(Ring const& ring, Matrix const& other) const {
    Matrix out(rows, other.cols);
    for (std::size_t i = 0; i < rows; ++i) {
      for (std::size_t k = 0; k < cols; ++k) {
        if (ring.is_zero(at(i, k))) {
          continue;
        }
        for (std::size_t j = 0; j < other.cols; ++j) {
          ring.fma(out.at(i, j), at(i, k), other.at(k, j));
        }
      }
    }
    return out;
  }

  SmithForm smith_normal_form(IntMatrix a, std::size_t cols) {
    std::size_t const m = a.size();
    std::size_t const n = cols;
    SmithForm         s;
    s.rows  = m;
    s.cols  = n;
    s.u     = identity_int(m);
    s.u_inv = identity_int(m);
    s.v     = identity_int(n);

    auto swap_rows = [&](std::size_t i, std::size_t j) {
      if (i == j) {
        return;
      }
      std::swap(a[i], a[j]);
      std::swap(s.u[i], s.u[j]);
      for (std::size_t r = 0; r < m; ++r) {
        std::swap(s.u_inv[r][i], s.u_inv[r][j]);
      }
    };
    auto swap_cols = [&](std::size_t i, std::size_t j) {
      if (i == j) {
        return;
      }
      for (std::size_t r = 0; r < m; ++r) {
        std::swap(a[r][i], a[r][j]);
      }
      for (std::size_t r = 0; r < n; ++r) {
        std::swap(s.v[r][i], s.v[r][j]);
      }
    };
    // row_i += c * row_j
    auto add_row = [&](std::size_t i, std::size_t j, BigInt const& c) {
      for (std::size_t k = 0; k < n; ++k) {
        a[i][k] += c * a[j][k];
      }
      for (std::size_t k = 0; k < m; ++k) {
        s.u[i][k] += c * s.u[j][k];
        s.u_inv[k][j] -= c * s.u_inv[k][i];
      }
    };
    // col_i += c * col_j
    auto add_col = [&](std::size_t i, std::size_t j, BigInt const& c) {
      for (std::size_t k = 0; k < m; ++k) {
        a[k][i] += c * a[k][j];
      }
      for (std::size_t k = 0; k < n; ++k) {
        s.v[k][i] += c * s.v[k][j];
      }
    };

    std::size_t const diag = std::min(m, n);
    for (std::size_t t = 0; t < diag; ++t) {
      std::size_t pi = m, pj = n;
      for (std::size_t i = t; i < m; ++i) {
        for (std::size_t j = t; j < n; ++j) {
          if (a[i][j] != 0 && (pi == m || abs_big(a[i][j]) < abs_big(a[pi][pj]))) {
            pi = i;
            pj = j;
          }
        }
      }
      if (pi == m) {
        break;
      }
      swap_rows(t, pi);
      swap_cols(t, pj);

      for (;;) {
        for (std::size_t i = t + 1; i < m; ++i) {
          if (a[i][t] != 0) {
            add_row(i, t, -(a[i][t] / a[t][t]));
          }
        }
        for (std::size_t j = t + 1; j < n; ++j) {
          if (a[t][j] != 0) {
            add_col(j, t, -(a[t][j] / a[t][t]));
          }
        }
        // Any remainder is smaller than the pivot: move the smallest in.
        std::size_t ri = m, cj = n;
        for (std::size_t i = t + 1; i < m; ++i) {
          if (a[i][t] != 0 && (ri == m || abs_big(a[i][t]) < abs_big(a[ri][t]))) {
            ri = i;
          }
        }
        for (std::size_t j = t + 1; j < n; ++j) {
          if (a[t][j] != 0 && (cj == n || abs_big(a[t][j]) < abs_big(a[t][cj]))) {
            cj = j;
          }
        }
        if (ri != m && (cj == n || abs_big(a[ri][t]) <= abs_big(a[t][cj]))) {
          swap_rows(t, ri);
          continue;
        }
        if (cj != n) {
          swap_cols(t, cj);
          continue;
        }
        bool divisible = true;
        for (std::size_t i = t + 1; i < m && divisible; ++i) {
          for (std::size_t j = t + 1; j < n; ++j) {
            if (a[i][j] % a[t][t] != 0) {
              add_row(t, i, BigInt(1));
              divisible = false;
              break;
            }
          }
        }
        if (divisible) {
          break;
        }
      }
      if (a[t][t] < 0) {
        for (std::size_t k = 0; k < n; ++k) {
          a[t][k] = -a[t][k];
        }
        for (std::size_t k = 0; k < m; ++k) {
          s.u[t][k]     = -s.u[t][k];
          s.u_inv[k][t] = -s.u_inv[k][t];
        }
      }
    }
    s.diagonal.resize(diag);
    for (std::size_t i = 0; i < diag; ++i) {
      s.diagonal[i] = a[i][i];
    }
    return s;
  }

  LinearSolution solve_linear(Matrix const& m, Ring const& ring) {
    require_linear_algebra(ring);
    if (ring.is_field()) {
      return solve_field(m, ring);
    }
    return solve_smith(m, ring);
  }

  Submodule::Submodule(Ring ring, std::size_t dim) : ring_(std::move(ring)), dim_(dim) {
    require_linear_algebra(ring_);
  }

  Vector Submodule::reduce(Vector v) const {
    for (std::size_t k = 0; k < rows_.size(); ++k) {
      Scalar const c = v[pivots_[k]];
      if (ring_.is_zero(c)) {
        continue;
      }
      for (std::size_t j = 0; j < dim_; ++j) {
        if (!ring_.is_zero(rows_[k][j])) {
          v[j] = ring_.sub(v[j], ring_.mul(c, rows_[k][j]));
        }
      }
    }
    return v;
  }

  SmithForm const& Submodule::smith() const {
    if (!smith_) {
      Matrix g = Matrix::from_columns(dim_, gens_);
      IntMatrix a(dim_, std::vector<BigInt>(gens_.size()));
      for (std::size_t i = 0; i < dim_; ++i) {
        for (std::size_t j = 0; j < gens_.size(); ++j) {
          a[i][j] = ring_.lift(g.at(i, j));
        }
      }
      smith_ = smith_normal_form(std::move(a), gens_.size());
    }
    return *smith_;
  }

  bool Submodule::contains(Vector const& v) const {
    if (v.size() != dim_) {
      throw InputError("vector of length " + std::to_string(v.size())
                       + " tested against a submodule of R^" + std::to_string(dim_));
    }
    if (ring_.is_field()) {
      return is_zero_vector(reduce(v));
    }
    if (gens_.empty()) {
      return is_zero_vector(v);
    }
    SmithForm const& s     = smith();
    bool const       mod_n = ring_.kind() == RingKind::integers_mod;
    BigInt const     n     = ring_.modulus();
    for (std::size_t i = 0; i < dim_; ++i) {
      BigInt w = 0;
      for (std::size_t k = 0; k < dim_; ++k) {
        w += s.u[i][k] * ring_.lift(v[k]);
      }
      BigInt d = i < s.diagonal.size() ? s.diagonal[i] : BigInt(0);
      if (mod_n) {
        d = boost::multiprecision::gcd(d, n);
      }
      if (d == 0 ? w != 0 : w % d != 0) {
        return false;
      }
    }
    return true;
  }

  bool Submodule::insert(Vector const& v) {
    if (contains(v)) {
      return false;
    }
    if (!ring_.is_field()) {
      gens_.push_back(v);
      smith_.reset();
      return true;
    }
    Vector      r = reduce(v);
    std::size_t p = 0;
    while (ring_.is_zero(r[p])) {
      ++p;
    }
    r = scale(ring_, ring_.inv(r[p]), r);
    for (auto& row : rows_) {
      Scalar const c = row[p];
      if (!ring_.is_zero(c)) {
        for (std::size_t j = 0; j < dim_; ++j) {
          row[j] = ring_.sub(row[j], ring_.mul(c, r[j]));
        }
      }
    }
    auto pos = std::lower_bound(pivots_.begin(), pivots_.end(), p);
    rows_.insert(rows_.begin() + (pos - pivots_.begin()), std::move(r));
    pivots_.insert(pos, p);
    return true;
  }

  std::vector<Vector> Submodule::basis() const {
    if (ring_.is_field()) {
      return rows_;
    }
    if (gens_.empty()) {
      return {};
    }
    return solve_linear(Matrix::from_columns(dim_, gens_), ring_).image;
  }

  std::size_t Submodule::rank() const {
    if (ring_.is_field()) {
      return rows_.size();
    }
    if (gens_.empty()) {
      return 0;
    }
    return solve_linear(Matrix::from_columns(dim_, gens_), ring_).rank;
  }

  BigInt Submodule::cardinality() const {
    if (ring_.kind() != RingKind::integers_mod) {
      throw CapabilityError("submodule cardinality is only defined over Z/n");
    }
    BigInt const n = ring_.modulus();
    BigInt       c = 1;
    if (gens_.empty() && rows_.empty()) {
      return c;
    }
    if (ring_.is_field()) {
      for (std::size_t i = 0; i < rows_.size(); ++i) {
        c *= n;
      }
      return c;
    }
    for (BigInt const& d : smith().diagonal) {
      c *= n / boost::multiprecision::gcd(d, n);
    }
    return c;
  }

  bool Submodule::contains(Submodule const& other) const {
    for (auto const& b : other.ring_.is_field() ? other.rows_ : other.gens_) {
      if (!contains(b)) {
        return false;
      }
    }
    return true;
  }

  bool Submodule::operator==(Submodule const& other) const {
    return dim_ == other.dim_ && contains(other) && other.contains(*this);
  }

}  // namespace sectional

namespace sectional {

  std::optional<Vector> solve_particular(Matrix const& m, Vector const& b, Ring const& ring) {
    require_linear_algebra(ring);
    if (ring.is_field()) {
      Matrix aug(m.rows, m.cols + 1);
      for (std::size_t i = 0; i < m.rows; ++i) {
        for (std::size_t j = 0; j < m.cols; ++j) {
          aug.at(i, j) = m.at(i, j);
        }
        aug.at(i, m.cols) = ring.neg(b[i]);
      }
      // a kernel vector with last coordinate 1 gives a solution
      for (auto const& k : solve_linear(aug, ring).kernel) {
        if (!ring.is_zero(k[m.cols])) {
          Scalar const c = ring.inv(k[m.cols]);
          Vector       x(m.cols);
          for (std::size_t j = 0; j < m.cols; ++j) {
            x[j] = ring.mul(c, k[j]);
          }
          return x;
        }
      }
      return std::nullopt;
    }
    SmithForm const s     = smith_normal_form(lift(m, ring), m.cols);
    bool const      mod_n = ring.kind() == RingKind::integers_mod;
    BigInt const    n     = ring.modulus();
    std::vector<BigInt> y(m.cols);
    for (std::size_t i = 0; i < m.rows; ++i) {
      BigInt w = 0;
      for (std::size_t k = 0; k < m.rows; ++k) {
        w += s.u[i][k] * ring.lift(b[k]);
      }
      BigInt const d = i < s.diagonal.size() ? s.diagonal[i] : BigInt(0);
      if (!mod_n) {
        if (d == 0) {
          if (w != 0) {
            return std::nullopt;
          }
          continue;
        }
        if (w % d != 0) {
          return std::nullopt;
        }
        y[i] = w / d;
        continue;
      }
      BigInt const g = boost::multiprecision::gcd(d, n);
      if (mod_floor(w, g) != 0) {
        return std::nullopt;
      }
      if (d == 0 || i >= m.cols) {
        continue;
      }
      BigInt const ng = n / g;
      if (ng == 1) {
        continue;
      }
      Ring const   sub    = Ring::integers_mod(ng);
      Scalar const dinv   = sub.inv(Scalar(mod_floor(d / g, ng)));
      y[i]                = mod_floor((w / g) * boost::multiprecision::numerator(dinv), ng);
    }
    std::vector<BigInt> x(m.cols);
    for (std::size_t r = 0; r < m.cols; ++r) {
      for (std::size_t i = 0; i < m.cols; ++i) {
        x[r] += s.v[r][i] * y[i];
      }
    }
    return to_ring(ring, x);
  }

}  // namespace sectional
