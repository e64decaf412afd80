#include <doctest.h>

#include <random>

#include "support.hpp"

using namespace sectional;

namespace {

  // section over P2 read as a 2x2 matrix, (i,j) at [i-1][j-1]
  std::vector<Vector> as_matrix(Section const& s, Semigroupoid const& p) {
    std::vector<Vector> m(2, Vector(2));
    for (std::size_t i = 0; i < 2; ++i) {
      for (std::size_t j = 0; j < 2; ++j) {
        ArrowId const a = p.arrow("(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")");
        m[i][j]         = s.at(a)[0];
      }
    }
    return m;
  }

}  // namespace

TEST_CASE("convolution over the pair groupoid is matrix multiplication") {
  for (Ring const& r : {Ring::rationals(), Ring::integers_mod(4)}) {
    SemigroupoidRef p = share(catalog::pair_groupoid(2));
    BundleRef       b = share(Bundle::trivial(r, p));
    std::mt19937_64 gen(1);
    for (int n = 0; n < 100; ++n) {
      Section const x  = Section::random(b, gen);
      Section const y  = Section::random(b, gen);
      auto const    mx = as_matrix(x, *p), my = as_matrix(y, *p), mz = as_matrix(convolve(x, y), *p);
      for (std::size_t i = 0; i < 2; ++i) {
        for (std::size_t j = 0; j < 2; ++j) {
          Scalar acc = r.zero();
          for (std::size_t k = 0; k < 2; ++k) {
            r.fma(acc, mx[i][k], my[k][j]);
          }
          CHECK(mz[i][j] == acc);
        }
      }
    }
  }
}

TEST_CASE("sections prune zeros and compare structurally") {
  BundleRef b = share(Bundle::trivial(Ring::rationals(), share(catalog::cyclic_group(2))));
  Section   s(b), t(b);
  s.set(0, {Scalar(0)});
  CHECK(s == t);
  CHECK(s.values().empty());
  CHECK_THROWS_AS(s.set(0, {Scalar(1), Scalar(2)}), InputError);
}

TEST_CASE("bundle validation rejects bad constants") {
  SemigroupoidRef t = share(catalog::trivial_monoid());
  BundleData      d;
  d.id        = "bad";
  d.ranks     = {2};
  // e0 e0 = e1, e1 anything = 0: (e0 e0) e0 = e1 e0 = 0 but e0 (e0 e0) = e0 e1 = e0
  d.constants = {{{0, 0}, {{{Scalar(0), Scalar(1)}, {Scalar(1), Scalar(0)}},
                           {{Scalar(0), Scalar(0)}, {Scalar(0), Scalar(0)}}}}};
  auto b      = Bundle::validate(Ring::rationals(), t, d);
  REQUIRE_FALSE(b.ok());
  CHECK(b.report().check == "associativity");

  d.constants = {{{0, 0}, {{{Scalar(1)}}}}};
  auto shape  = Bundle::validate(Ring::rationals(), t, d);
  REQUIRE_FALSE(shape.ok());
  CHECK(shape.report().structural);
}

TEST_CASE("graded round trip for R[Z2] and the matrix units over P2") {
  for (AlgebraRef a : {testing::group_algebra_z2(Ring::rationals()),
                       testing::matrix_units(Ring::rationals())}) {
    CAPTURE(a->provenance());
    CertifyOptions opt;
    opt.inverse_multiplicative = true;
    opt.degrees                = true;
    Certificate c              = certify(graded_roundtrip_iso(a), opt);
    CHECK(c.passed());
    CHECK(c.inverse_composites.value_or(false));
  }
}

TEST_CASE("semidirect product and germs of the semilattice example") {
  LandPreactionRef th = testing::semilattice_on_x();
  CHECK(th->is_associative());
  auto sd = semidirect_product(*th);
  REQUIRE(sd.ok());
  CHECK(sd->semigroupoid->num_arrows() == 3);

  auto g = germ_quotient(*th);
  REQUIRE(g.ok());
  CHECK(g->quotient.semigroupoid->num_arrows() == 2);
  CHECK(g->groupoid.ok);

  // (s1,a) ~ (s2,a) iff some u <= s1, s2 has a in dom θ_u
  InverseSemigroupoid const& S = th->actor();
  auto const&                comp = g->semidirect.components;
  for (ArrowId x = 0; x < comp.size(); ++x) {
    for (ArrowId y = 0; y < comp.size(); ++y) {
      bool related = comp[x].second == comp[y].second && [&] {
        for (ArrowId u = 0; u < S.base().num_arrows(); ++u) {
          if (S.leq(u, comp[x].first) && S.leq(u, comp[y].first) && th->in_dom(u, comp[x].second)) {
            return true;
          }
        }
        return false;
      }();
      CHECK(g->congruence.related(x, y) == related);
    }
  }
}

TEST_CASE("preaction validation rejects a non-bijective map") {
  InverseSemigroupoidRef s = catalog::as_inverse(catalog::trivial_monoid());
  SemigroupoidRef        g = share(catalog::unit_groupoid({"x", "y"}));
  ActionGraphs           graphs{{{0, 0}, {1, 0}}};
  CHECK_FALSE(LandPreaction::validate(s, g, graphs).ok());
}
