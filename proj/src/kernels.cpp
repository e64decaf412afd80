#include "sectional/kernels.hpp"

#include <atomic>
#include <limits>

#if defined(SECTIONAL_HAVE_OPENMP)
#include <omp.h>
#endif

namespace sectional {

  namespace {
    std::atomic<ExecPolicy> g_policy{ExecPolicy::serial};

    constexpr std::uint64_t kNoHit = std::numeric_limits<std::uint64_t>::max();

    kernels::Triple unpack3(std::uint64_t k, std::size_t n) {
      return {static_cast<std::uint32_t>(k / (n * n)), static_cast<std::uint32_t>(k / n % n),
              static_cast<std::uint32_t>(k % n)};
    }

    // First failing (b, c) for a fixed a, as a linear index, or kNoHit.
    std::uint64_t assoc_row(std::size_t n, std::vector<std::uint32_t> const& prod, std::size_t a) {
      for (std::size_t b = 0; b < n; ++b) {
        std::uint32_t const ab = prod[a * n + b];
        if (ab == kNone) {
          continue;
        }
        for (std::size_t c = 0; c < n; ++c) {
          std::uint32_t const bc = prod[b * n + c];
          if (bc == kNone) {
            continue;
          }
          if (prod[ab * n + c] != prod[a * n + bc]) {
            return (a * n + b) * n + c;
          }
        }
      }
      return kNoHit;
    }

    Vector left_assoc(Ring const& ring, StructureConstants const& sc, std::size_t i, std::size_t j,
                      std::size_t k) {
      Vector out(sc.n);
      for (auto const& [p, c] : sc.at(i, j)) {
        for (auto const& [r, d] : sc.at(p, k)) {
          ring.fma(out[r], c, d);
        }
      }
      return out;
    }

    Vector right_assoc(Ring const& ring, StructureConstants const& sc, std::size_t i,
                       std::size_t j, std::size_t k) {
      Vector out(sc.n);
      for (auto const& [q, c] : sc.at(j, k)) {
        for (auto const& [r, d] : sc.at(i, q)) {
          ring.fma(out[r], c, d);
        }
      }
      return out;
    }

    std::uint64_t algebra_assoc_row(Ring const& ring, StructureConstants const& sc, std::size_t i) {
      std::size_t const n = sc.n;
      for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t k = 0; k < n; ++k) {
          if (left_assoc(ring, sc, i, j, k) != right_assoc(ring, sc, i, j, k)) {
            return (i * n + j) * n + k;
          }
        }
      }
      return kNoHit;
    }

    bool multiplicative_at(Ring const& ring, StructureConstants const& source,
                           StructureConstants const& target, std::vector<SparseVector> const& images,
                           std::size_t u, std::size_t v) {
      Vector lhs(target.n);
      for (auto const& [p, c] : source.at(u, v)) {
        axpy(ring, lhs, c, images[p]);
      }
      Vector const rhs =
          target.multiply(ring, to_dense(images[u], target.n), to_dense(images[v], target.n));
      return lhs == rhs;
    }
  }  // namespace

  bool openmp_available() noexcept {
#if defined(SECTIONAL_HAVE_OPENMP)
    return true;
#else
    return false;
#endif
  }

  ExecPolicy default_policy() noexcept {
    return g_policy.load();
  }

  void set_default_policy(ExecPolicy p) noexcept {
    g_policy.store(p);
  }

  SparseVector to_sparse(Vector const& v) {
    SparseVector out;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (v[i] != 0) {
        out.emplace_back(static_cast<std::uint32_t>(i), v[i]);
      }
    }
    return out;
  }

  Vector to_dense(SparseVector const& v, std::size_t n) {
    Vector out(n);
    for (auto const& [i, c] : v) {
      out[i] = c;
    }
    return out;
  }

  void axpy(Ring const& ring, Vector& acc, Scalar const& c, SparseVector const& v) {
    for (auto const& [i, x] : v) {
      ring.fma(acc[i], c, x);
    }
  }

  Vector StructureConstants::multiply(Ring const& ring, Vector const& x, Vector const& y) const {
    Vector out(n);
    for (std::size_t i = 0; i < n; ++i) {
      if (x[i] == 0) {
        continue;
      }
      for (std::size_t j = 0; j < n; ++j) {
        if (y[j] == 0) {
          continue;
        }
        Scalar const xy = ring.mul(x[i], y[j]);
        for (auto const& [p, c] : at(i, j)) {
          ring.fma(out[p], xy, c);
        }
      }
    }
    return out;
  }

  namespace kernels {

    std::optional<Triple> associativity_failure_serial(std::size_t                       n,
                                                       std::vector<std::uint32_t> const& prod) {
      for (std::size_t a = 0; a < n; ++a) {
        std::uint64_t const hit = assoc_row(n, prod, a);
        if (hit != kNoHit) {
          return unpack3(hit, n);
        }
      }
      return std::nullopt;
    }

    std::optional<Triple> associativity_failure_parallel(std::size_t                       n,
                                                         std::vector<std::uint32_t> const& prod) {
      std::uint64_t best = kNoHit;
      long const    rows = static_cast<long>(n);
#if defined(SECTIONAL_HAVE_OPENMP)
#pragma omp parallel for schedule(dynamic, 1) reduction(min : best)
#endif
      for (long a = 0; a < rows; ++a) {
        std::uint64_t const hit = assoc_row(n, prod, static_cast<std::size_t>(a));
        if (hit < best) {
          best = hit;
        }
      }
      if (best == kNoHit) {
        return std::nullopt;
      }
      return unpack3(best, n);
    }

    std::optional<Triple> associativity_failure(std::size_t                       n,
                                                std::vector<std::uint32_t> const& prod,
                                                ExecPolicy                        policy) {
      return policy == ExecPolicy::parallel ? associativity_failure_parallel(n, prod)
                                            : associativity_failure_serial(n, prod);
    }

    std::optional<Triple> algebra_associativity_failure_serial(Ring const&               ring,
                                                               StructureConstants const& sc) {
      for (std::size_t i = 0; i < sc.n; ++i) {
        std::uint64_t const hit = algebra_assoc_row(ring, sc, i);
        if (hit != kNoHit) {
          return unpack3(hit, sc.n);
        }
      }
      return std::nullopt;
    }

    std::optional<Triple> algebra_associativity_failure_parallel(Ring const&               ring,
                                                                 StructureConstants const& sc) {
      std::uint64_t best = kNoHit;
      long const    rows = static_cast<long>(sc.n);
#if defined(SECTIONAL_HAVE_OPENMP)
#pragma omp parallel for schedule(dynamic, 1) reduction(min : best)
#endif
      for (long i = 0; i < rows; ++i) {
        std::uint64_t const hit = algebra_assoc_row(ring, sc, static_cast<std::size_t>(i));
        if (hit < best) {
          best = hit;
        }
      }
      if (best == kNoHit) {
        return std::nullopt;
      }
      return unpack3(best, sc.n);
    }

    std::optional<Triple> algebra_associativity_failure(Ring const&               ring,
                                                        StructureConstants const& sc,
                                                        ExecPolicy                policy) {
      return policy == ExecPolicy::parallel ? algebra_associativity_failure_parallel(ring, sc)
                                            : algebra_associativity_failure_serial(ring, sc);
    }

    std::optional<Pair> multiplicativity_failure_serial(Ring const&                      ring,
                                                        StructureConstants const&        source,
                                                        StructureConstants const&        target,
                                                        std::vector<SparseVector> const& images) {
      for (std::size_t u = 0; u < source.n; ++u) {
        for (std::size_t v = 0; v < source.n; ++v) {
          if (!multiplicative_at(ring, source, target, images, u, v)) {
            return Pair{static_cast<std::uint32_t>(u), static_cast<std::uint32_t>(v)};
          }
        }
      }
      return std::nullopt;
    }

    std::optional<Pair> multiplicativity_failure_parallel(Ring const&                      ring,
                                                          StructureConstants const&        source,
                                                          StructureConstants const&        target,
                                                          std::vector<SparseVector> const& images) {
      std::size_t const   n     = source.n;
      std::uint64_t       best  = kNoHit;
      long const          total = static_cast<long>(n * n);
#if defined(SECTIONAL_HAVE_OPENMP)
#pragma omp parallel for schedule(dynamic, 8) reduction(min : best)
#endif
      for (long k = 0; k < total; ++k) {
        std::size_t const u = static_cast<std::size_t>(k) / n;
        std::size_t const v = static_cast<std::size_t>(k) % n;
        if (static_cast<std::uint64_t>(k) < best
            && !multiplicative_at(ring, source, target, images, u, v)) {
          best = static_cast<std::uint64_t>(k);
        }
      }
      if (best == kNoHit) {
        return std::nullopt;
      }
      return Pair{static_cast<std::uint32_t>(best / n), static_cast<std::uint32_t>(best % n)};
    }

    std::optional<Pair> multiplicativity_failure(Ring const&                      ring,
                                                 StructureConstants const&        source,
                                                 StructureConstants const&        target,
                                                 std::vector<SparseVector> const& images,
                                                 ExecPolicy                       policy) {
      return policy == ExecPolicy::parallel
                 ? multiplicativity_failure_parallel(ring, source, target, images)
                 : multiplicativity_failure_serial(ring, source, target, images);
    }

  }  // namespace kernels

}  // namespace sectional
