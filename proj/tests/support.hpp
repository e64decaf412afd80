#ifndef SECTIONAL_TESTS_SUPPORT_HPP_
#define SECTIONAL_TESTS_SUPPORT_HPP_

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sectional/catalog.hpp"
#include "sectional/theorems.hpp"

namespace testing {

  using namespace sectional;

  struct Violation {
    std::string              check;
    std::vector<std::string> witness;
  };

  //! First axiom violation of raw tables, found by direct enumeration in the
  //! validator's documented order.
  inline std::optional<Violation> oracle_violation(SemigroupoidTables const& t) {
    std::size_t const n   = t.arrow_names.size();
    auto const&       nm  = t.arrow_names;
    auto              mul = [&](ArrowId a, ArrowId b) { return t.prod[a * n + b]; };
    for (ArrowId a = 0; a < n; ++a) {
      for (ArrowId b = 0; b < n; ++b) {
        if (t.src[a] == t.rng[b] && mul(a, b) == kNoArrow) {
          return Violation{"composable-product", {nm[a], nm[b]}};
        }
      }
    }
    for (ArrowId a = 0; a < n; ++a) {
      for (ArrowId b = 0; b < n; ++b) {
        if (t.src[a] != t.rng[b] && mul(a, b) != kNoArrow) {
          return Violation{"non-composable-product", {nm[a], nm[b]}};
        }
      }
    }
    for (ArrowId a = 0; a < n; ++a) {
      for (ArrowId b = 0; b < n; ++b) {
        ArrowId const ab = mul(a, b);
        if (ab == kNoArrow) {
          continue;
        }
        if (t.rng[ab] != t.rng[a]) {
          return Violation{"range-compatibility", {nm[a], nm[b]}};
        }
        if (t.src[ab] != t.src[b]) {
          return Violation{"source-compatibility", {nm[a], nm[b]}};
        }
      }
    }
    for (ArrowId a = 0; a < n; ++a) {
      for (ArrowId b = 0; b < n; ++b) {
        for (ArrowId c = 0; c < n; ++c) {
          ArrowId const ab = mul(a, b), bc = mul(b, c);
          ArrowId const l  = ab == kNoArrow ? kNoArrow : mul(ab, c);
          ArrowId const r  = bc == kNoArrow ? kNoArrow : mul(a, bc);
          if (l != r) {
            return Violation{"associativity", {nm[a], nm[b], nm[c]}};
          }
        }
      }
    }
    return std::nullopt;
  }

  inline std::vector<Semigroupoid> corpus() {
    return {catalog::trivial_monoid(), catalog::pair_groupoid(2), catalog::cyclic_group(2),
            catalog::semilattice(), catalog::klein_four()};
  }

  struct Perturbation {
    std::string        name;
    SemigroupoidTables tables;
    Violation          expected;
  };

  //! Single-entry changes of the corpus product tables that break an axiom,
  //! taken round-robin over the corpus until `count` are found.
  inline std::vector<Perturbation> perturbations(std::size_t count) {
    std::vector<std::vector<Perturbation>> per;
    for (auto const& s : corpus()) {
      std::vector<Perturbation> found;
      SemigroupoidTables const& t = s.tables();
      std::size_t const         n = t.arrow_names.size();
      for (std::size_t k = 0; k < n * n; ++k) {
        std::vector<ArrowId> options;
        for (ArrowId c = 0; c < n; ++c) {
          options.push_back(c);
        }
        options.push_back(kNoArrow);
        for (ArrowId c : options) {
          if (c == t.prod[k]) {
            continue;
          }
          SemigroupoidTables p = t;
          p.prod[k]            = c;
          if (auto v = oracle_violation(p)) {
            std::string const to = c == kNoArrow ? "undefined" : t.arrow_names[c];
            found.push_back({t.id + ": " + t.arrow_names[k / n] + "·" + t.arrow_names[k % n]
                                 + " := " + to,
                             std::move(p), *v});
          }
        }
      }
      per.push_back(std::move(found));
    }
    std::vector<Perturbation> out;
    for (std::size_t round = 0; out.size() < count; ++round) {
      bool any = false;
      for (auto& list : per) {
        // spread the picks over each list so several checks are exercised
        std::size_t const i = round * 7;
        if (i < list.size() && out.size() < count) {
          out.push_back(list[i]);
          any = true;
        }
      }
      if (!any) {
        break;
      }
    }
    return out;
  }

  //! R[Z/2] with basis δu, δg graded by Z/2.
  inline AlgebraRef group_algebra_z2(Ring const& ring) {
    SemigroupoidRef    g = share(catalog::cyclic_group(2));
    StructureConstants sc;
    sc.n = 2;
    for (std::size_t a = 0; a < 2; ++a) {
      for (std::size_t b = 0; b < 2; ++b) {
        sc.table.push_back({{static_cast<std::uint32_t>(a ^ b), ring.one()}});
      }
    }
    return share(AlgebraPresentation::validate(ring, {"δu", "δg"}, sc, "R[Z2]",
                                               Grading{g, {0, 1}})
                     .value());
  }

  //! 2x2 matrix units e_ij (index 2i+j) graded by the pair groupoid via
  //! e_ij ↦ (i,j).
  inline AlgebraRef matrix_units(Ring const& ring) {
    SemigroupoidRef    p = share(catalog::pair_groupoid(2));
    StructureConstants sc;
    sc.n = 4;
    for (std::size_t a = 0; a < 4; ++a) {
      for (std::size_t b = 0; b < 4; ++b) {
        std::size_t const i = a / 2, j = a % 2, k = b / 2, l = b % 2;
        sc.table.push_back(j == k ? SparseVector{{static_cast<std::uint32_t>(2 * i + l), ring.one()}}
                                  : SparseVector{});
      }
    }
    std::vector<ArrowId> deg;
    for (std::string const name : {"(1,1)", "(1,2)", "(2,1)", "(2,2)"}) {
      deg.push_back(p->arrow(name));
    }
    return share(AlgebraPresentation::validate(ring, {"e11", "e12", "e21", "e22"}, sc, "M2",
                                               Grading{p, deg})
                     .value());
  }

  //! Identity-on-domain preaction of the semilattice {1, e} on the unit
  //! groupoid {1_x, 1_y}: θ_1 = id, θ_e = id on {1_x}.
  inline LandPreactionRef semilattice_on_x() {
    InverseSemigroupoidRef s = catalog::as_inverse(catalog::semilattice());
    SemigroupoidRef        g = share(catalog::unit_groupoid({"x", "y"}));
    ActionGraphs           graphs(2);
    graphs[s->base().arrow("1")] = {{0, 0}, {1, 1}};
    graphs[s->base().arrow("e")] = {{g->arrow("1_x"), g->arrow("1_x")}};
    return std::make_shared<LandPreaction const>(
        LandPreaction::validate(s, g, graphs, "semilattice-on-X").value());
  }

}  // namespace testing

#endif  // SECTIONAL_TESTS_SUPPORT_HPP_
