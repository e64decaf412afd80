#ifndef SECTIONAL_KERNELS_HPP_
#define SECTIONAL_KERNELS_HPP_

// Exhaustive enumeration kernels. Each comes as a serial reference and an
// OpenMP version; both return the lexicographically smallest witness, so
// the choice of policy never changes a result.

#include <array>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "ring.hpp"

namespace sectional {

  enum class ExecPolicy { serial, parallel };

  bool       openmp_available() noexcept;
  ExecPolicy default_policy() noexcept;
  void       set_default_policy(ExecPolicy p) noexcept;

  inline constexpr std::uint32_t kNone = 0xffffffffu;

  //! Sparse vector as (index, nonzero coefficient) pairs sorted by index.
  using SparseVector = std::vector<std::pair<std::uint32_t, Scalar>>;

  SparseVector to_sparse(Vector const& v);
  Vector       to_dense(SparseVector const& v, std::size_t n);
  //! acc += c * v, entrywise.
  void axpy(Ring const& ring, Vector& acc, Scalar const& c, SparseVector const& v);

  //! Structure constants of an algebra with basis size n: entry i*n+j holds
  //! the product e_i e_j.
  struct StructureConstants {
    std::size_t               n = 0;
    std::vector<SparseVector> table;

    SparseVector const& at(std::size_t i, std::size_t j) const {
      return table[i * n + j];
    }
    //! Bilinear extension of the table.
    Vector multiply(Ring const& ring, Vector const& x, Vector const& y) const;
    bool   operator==(StructureConstants const& o) const = default;
  };

  namespace kernels {

    using Triple = std::array<std::uint32_t, 3>;
    using Pair   = std::array<std::uint32_t, 2>;

    //! Smallest (a,b,c) with ab, bc, (ab)c, a(bc) all defined and
    //! (ab)c != a(bc), or with exactly one of (ab)c and a(bc) defined.
    //! `prod` is an n*n table with kNone for undefined products.
    std::optional<Triple> associativity_failure_serial(std::size_t                       n,
                                                       std::vector<std::uint32_t> const& prod);
    std::optional<Triple> associativity_failure_parallel(std::size_t                       n,
                                                         std::vector<std::uint32_t> const& prod);
    std::optional<Triple> associativity_failure(std::size_t                       n,
                                                std::vector<std::uint32_t> const& prod,
                                                ExecPolicy                        policy);

    //! Smallest basis triple violating (e_i e_j) e_k = e_i (e_j e_k).
    std::optional<Triple> algebra_associativity_failure_serial(Ring const&               ring,
                                                               StructureConstants const& sc);
    std::optional<Triple> algebra_associativity_failure_parallel(Ring const&               ring,
                                                                 StructureConstants const& sc);
    std::optional<Triple> algebra_associativity_failure(Ring const&               ring,
                                                        StructureConstants const& sc,
                                                        ExecPolicy                policy);

    //! Smallest source basis pair (u,v) with f(e_u e_v) != f(e_u) f(e_v),
    //! where `images[u]` is f(e_u) in the target basis.
    std::optional<Pair> multiplicativity_failure_serial(Ring const&                      ring,
                                                        StructureConstants const&        source,
                                                        StructureConstants const&        target,
                                                        std::vector<SparseVector> const& images);
    std::optional<Pair> multiplicativity_failure_parallel(Ring const&                      ring,
                                                          StructureConstants const&        source,
                                                          StructureConstants const&        target,
                                                          std::vector<SparseVector> const& images);
    std::optional<Pair> multiplicativity_failure(Ring const&                      ring,
                                                 StructureConstants const&        source,
                                                 StructureConstants const&        target,
                                                 std::vector<SparseVector> const& images,
                                                 ExecPolicy                       policy);

    //! Fills the n*n table from a per-pair product callback.
    template <typename F>
    StructureConstants tabulate_serial(std::size_t n, F&& product) {
      StructureConstants sc;
      sc.n = n;
      sc.table.resize(n * n);
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
          sc.table[i * n + j] = product(i, j);
        }
      }
      return sc;
    }

    template <typename F>
    StructureConstants tabulate_parallel(std::size_t n, F&& product) {
      StructureConstants sc;
      sc.n = n;
      sc.table.resize(n * n);
      long const total = static_cast<long>(n * n);
#if defined(SECTIONAL_HAVE_OPENMP)
#pragma omp parallel for schedule(dynamic, 16)
#endif
      for (long k = 0; k < total; ++k) {
        sc.table[k] = product(static_cast<std::size_t>(k) / n, static_cast<std::size_t>(k) % n);
      }
      return sc;
    }

    template <typename F>
    StructureConstants tabulate(std::size_t n, F&& product, ExecPolicy policy) {
      if (policy == ExecPolicy::parallel) {
        return tabulate_parallel(n, std::forward<F>(product));
      }
      return tabulate_serial(n, std::forward<F>(product));
    }

  }  // namespace kernels

}  // namespace sectional

#endif  // SECTIONAL_KERNELS_HPP_
