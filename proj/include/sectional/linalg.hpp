#ifndef SECTIONAL_LINALG_HPP_
#define SECTIONAL_LINALG_HPP_

#include <cstddef>
#include <optional>
#include <vector>

#include "ring.hpp"

namespace sectional {

  //! Dense row-major matrix over a ring. Acts on column vectors, so a
  //! rows x cols matrix maps R^cols to R^rows.
  struct Matrix {
    std::size_t         rows = 0;
    std::size_t         cols = 0;
    std::vector<Scalar> data;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c) {}

    Scalar& at(std::size_t i, std::size_t j) {
      return data[i * cols + j];
    }
    Scalar const& at(std::size_t i, std::size_t j) const {
      return data[i * cols + j];
    }

    static Matrix identity(Ring const& ring, std::size_t n);
    //! Matrix whose j-th column is `columns[j]`.
    static Matrix from_columns(std::size_t rows, std::vector<Vector> const& columns);

    Vector column(std::size_t j) const;
    Vector apply(Ring const& ring, Vector const& v) const;
    Matrix multiply(Ring const& ring, Matrix const& other) const;
    bool   operator==(Matrix const& o) const = default;
  };

  struct LinearSolution {
    //! Over a field: the usual rank. Over Z/n and Z: the number of invariant
    //! factors that are nonzero in the ring.
    std::size_t         rank = 0;
    std::vector<Vector> kernel;
    std::vector<Vector> image;
    //! Smith invariant factors of the integer lift (empty for fields).
    std::vector<BigInt> invariant_factors;
  };

  //! Kernel and image of `m` over `ring`. Fields use Gaussian elimination;
  //! Z and Z/n go through the Smith normal form of the integer lift.
  //! Throws CapabilityError for finite-table rings.
  LinearSolution solve_linear(Matrix const& m, Ring const& ring);

  //! Some x with m * x = b, or nothing when b is not in the image.
  std::optional<Vector> solve_particular(Matrix const& m, Vector const& b, Ring const& ring);

  //! Smith normal form U * A * V = D of an integer matrix, with U^-1 kept so
  //! that image generators can be mapped back.
  struct SmithForm {
    std::size_t                      rows = 0, cols = 0;
    std::vector<BigInt>              diagonal;  // min(rows, cols) entries, d_i | d_{i+1}
    std::vector<std::vector<BigInt>> u, u_inv, v;
  };
  SmithForm smith_normal_form(std::vector<std::vector<BigInt>> a, std::size_t cols);

  //! Finitely generated submodule of R^dim with decidable membership.
  class Submodule {
   public:
    Submodule(Ring ring, std::size_t dim);

    std::size_t dim() const noexcept {
      return dim_;
    }
    Ring const& ring() const noexcept {
      return ring_;
    }

    bool contains(Vector const& v) const;
    //! Adds `v`; returns whether the submodule grew.
    bool insert(Vector const& v);

    //! Field: reduced row-echelon basis. Z/n and Z: Smith-reduced
    //! generators, one per nonzero invariant factor.
    std::vector<Vector> basis() const;
    std::size_t         rank() const;
    //! Number of elements; only meaningful over Z/n.
    BigInt cardinality() const;

    bool operator==(Submodule const& other) const;
    bool contains(Submodule const& other) const;

   private:
    Ring                       ring_;
    std::size_t                dim_;
    std::vector<Vector>        rows_;    // field: RREF rows
    std::vector<std::size_t>   pivots_;  // field: pivot column of each row
    std::vector<Vector>        gens_;    // otherwise: raw generators
    mutable std::optional<SmithForm> smith_;

    Vector           reduce(Vector v) const;
    SmithForm const& smith() const;
  };

}  // namespace sectional

#endif  // SECTIONAL_LINALG_HPP_
