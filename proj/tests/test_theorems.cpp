#include <doctest.h>

#include "support.hpp"

using namespace sectional;

namespace {

  Ring const q = Ring::rationals();

  // upper triangular 2x2 matrices over F2, [[a,b],[0,c]] at index 4a+2b+c
  Ring upper_triangular_f2() {
    RingTable t;
    auto      entries = [](long k) { return std::array<long, 3>{k >> 2 & 1, k >> 1 & 1, k & 1}; };
    auto      index   = [](long a, long b, long c) { return 4 * (a & 1) + 2 * (b & 1) + (c & 1); };
    t.add.assign(8, std::vector<long>(8));
    t.mul.assign(8, std::vector<long>(8));
    for (long x = 0; x < 8; ++x) {
      t.elements.push_back("m" + std::to_string(x));
      for (long y = 0; y < 8; ++y) {
        auto [a, b, c] = entries(x);
        auto [d, e, f] = entries(y);
        t.add[x][y]    = index(a + d, b + e, c + f);
        t.mul[x][y]    = index(a * d, a * e + b * f, c * f);
      }
    }
    t.zero = 0;
    t.one  = 5;
    return Ring::from_table(t).value();
  }

  BundleRef rank2_diagonal() {
    BundleData d;
    d.id        = "R2";
    d.ranks     = {2};
    d.constants = {{{0, 0}, {{{Scalar(1), Scalar(0)}, {Scalar(0), Scalar(0)}},
                             {{Scalar(0), Scalar(0)}, {Scalar(0), Scalar(1)}}}}};
    return share(Bundle::validate(q, share(catalog::trivial_monoid()), d).value());
  }

  LandPreactionRef z2_on_point() {
    InverseSemigroupoidRef s = catalog::as_inverse(catalog::cyclic_group(2));
    return std::make_shared<LandPreaction const>(
        LandPreaction::trivial(s, share(catalog::trivial_monoid())));
  }

  Checked<BundleAction> swap_with(Matrix l) {
    std::vector<std::map<ArrowId, Matrix>> tr(2);
    tr[0][0] = Matrix::identity(q, 2);
    tr[1][0] = std::move(l);
    return BundleAction::validate(z2_on_point(), rank2_diagonal(), tr, "swap");
  }

  Matrix matrix(std::vector<std::vector<long>> const& rows) {
    Matrix m(rows.size(), rows.front().size());
    for (std::size_t i = 0; i < m.rows; ++i) {
      for (std::size_t j = 0; j < m.cols; ++j) {
        m.at(i, j) = rows[i][j];
      }
    }
    return m;
  }

  BundleRef trivial(SemigroupoidRef g) {
    return share(Bundle::trivial(q, std::move(g)));
  }

}  // namespace

TEST_CASE("tensor products of algebras") {
  AlgebraRef z2 = testing::group_algebra_z2(q);
  auto       a  = tensor_product_algebra(*z2, ring_as_algebra(q));
  CHECK(a.rank() == 2);
  CHECK(a.constants() == z2->constants());
  CHECK(tensor_product_algebra(*z2, *z2).rank() == 4);

  // rank 2 x rank 3, constants are products of constants
  AlgebraPresentation const r2 = sectional_algebra(*trivial(share(catalog::cyclic_group(2))));
  AlgebraPresentation const r3 = sectional_algebra(*trivial(share(catalog::cyclic_group(3))));
  auto const                t  = tensor_product_algebra(r2, r3);
  REQUIRE(t.rank() == 6);
  for (std::size_t x = 0; x < 6; ++x) {
    for (std::size_t y = 0; y < 6; ++y) {
      Vector const lhs = r2.constants().multiply(q, r2.basis_vector(x / 3), r2.basis_vector(y / 3));
      Vector const rhs = r3.constants().multiply(q, r3.basis_vector(x % 3), r3.basis_vector(y % 3));
      Vector       expected(6);
      for (std::size_t i = 0; i < 2; ++i) {
        for (std::size_t j = 0; j < 3; ++j) {
          expected[i * 3 + j] = lhs[i] * rhs[j];
        }
      }
      CHECK(t.constants().multiply(q, t.basis_vector(x), t.basis_vector(y)) == expected);
    }
  }

  Ring const nc = upper_triangular_f2();
  CHECK_FALSE(nc.is_commutative());
  CHECK_THROWS_AS(tensor_product_algebra(ring_as_algebra(nc), ring_as_algebra(nc)),
                  CapabilityError);
}

TEST_CASE("tensor theorem instances") {
  struct Case {
    BundleRef       b;
    SemigroupoidRef e;
    std::size_t     rank;
  };
  BundleData m2;
  m2.id    = "M2";
  m2.ranks = {4};
  PairConstants c(4, std::vector<Vector>(4, Vector(4)));
  for (std::size_t a = 0; a < 4; ++a) {
    for (std::size_t b = 0; b < 4; ++b) {
      if (a % 2 == b / 2) {
        c[a][b][2 * (a / 2) + b % 2] = 1;
      }
    }
  }
  m2.constants = {{{0, 0}, c}};
  std::vector<Case> cases = {
      {trivial(share(catalog::trivial_monoid())), share(catalog::pair_groupoid(2)), 4},
      {trivial(share(catalog::pair_groupoid(2))), share(catalog::cyclic_group(2)), 8},
      {share(Bundle::validate(q, share(catalog::trivial_monoid()), m2).value()),
       share(catalog::unit_groupoid({"p", "q"})), 8}};
  for (auto const& k : cases) {
    auto out = tensor_theorem(k.b, k.e);
    CHECK(out.report.passed());
    CHECK(out.target->rank() == k.rank);
    CHECK(out.tensor->rank() == k.rank);
    CHECK(is_bijective(out.t.matrix(), q));
  }
}

TEST_CASE("bundle actions: validation and the swap example") {
  auto ok = swap_with(matrix({{0, 1}, {1, 0}}));
  REQUIRE(ok.ok());
  auto theta = induced_theta(ok.value());
  REQUIRE(theta.ok());
  CHECK(theta->image(1, 0) == Vector{Scalar(0), Scalar(1)});
  CHECK(theta->image(1, 1) == Vector{Scalar(1), Scalar(0)});

  auto sd = bundle_semidirect(ok.value());
  REQUIRE(sd.ok());
  CHECK(sectional_algebra(*sd->bundle).rank() == 4);

  auto ct = crossed_theorem(ok.value());
  REQUIRE(ct.ok());
  CHECK(ct->report.passed());
  CHECK(ct->crossed.algebra->rank() == 4);

  auto singular = swap_with(matrix({{1, 0}, {0, 0}}));
  REQUIRE_FALSE(singular.ok());
  CHECK(singular.report().check == "invertible");

  auto twisted = swap_with(matrix({{1, 1}, {0, -1}}));
  REQUIRE_FALSE(twisted.ok());
  CHECK(twisted.report().check == "intertwining");
}

TEST_CASE("crossed theorem on trivial and semilattice actions") {
  auto P2 = share(catalog::pair_groupoid(2));
  auto triv = std::make_shared<LandPreaction const>(
      LandPreaction::trivial(catalog::as_inverse(catalog::trivial_monoid()), P2));
  auto a = BundleAction::identity(triv, trivial(P2));
  REQUIRE(a.ok());
  auto t = crossed_theorem(a.value());
  REQUIRE(t.ok());
  CHECK(t->report.passed());
  CHECK(t->crossed.algebra->rank() == 4);

  LandPreactionRef th = testing::semilattice_on_x();
  auto s = BundleAction::identity(th, trivial(th->space_ref()));
  REQUIRE(s.ok());
  auto big = induced_theta(s.value());
  REQUIRE(big.ok());
  ArrowId const e = th->actor().base().arrow("e");
  CHECK(big->dom(e) == std::vector<std::size_t>{0});
  auto u = crossed_theorem(s.value());
  REQUIRE(u.ok());
  CHECK(u->report.passed());
  CHECK(u->sectional->rank() == 3);
  CHECK(u->crossed.algebra->rank() == 3);
}

TEST_CASE("smash products") {
  auto sm = smash_product(*testing::group_algebra_z2(q));
  REQUIRE(sm.ok());
  AlgebraPresentation const& a = *sm->algebra;
  CHECK(a.rank() == 4);
  std::size_t const uu = *a.find_label("δu#u"), ug = *a.find_label("δu#g");
  CHECK(a.product(uu, ug).empty());
  CHECK(smash_product(*testing::matrix_units(q))->algebra->rank() == 8);

  Homomorphism const unit = Homomorphism::validate(share(catalog::cyclic_group(2)),
                                                   share(catalog::trivial_monoid()), {0, 0})
                                .value();
  auto trivially = smash_theorem(trivial(unit.source_ref()), unit);
  REQUIRE(trivially.ok());
  CHECK(trivially->report.passed());
  CHECK(trivially->smash.algebra->rank() == 2);

  SemigroupoidRef    sl   = share(catalog::semilattice());
  Homomorphism const self = Homomorphism::identity(sl);
  auto not_groupoid = smash_product(sectional_algebra(*trivial(sl), &self));
  REQUIRE_FALSE(not_groupoid.ok());
  CHECK(not_groupoid.report().check == "groupoid");
}

TEST_CASE("skew products") {
  SemigroupoidRef z2 = share(catalog::cyclic_group(2));
  auto sk = skew_product(Homomorphism::identity(z2));
  REQUIRE(sk.ok());
  CHECK(sk->semigroupoid->num_arrows() == 4);
  CHECK(find_isomorphism(*sk->semigroupoid, catalog::pair_groupoid(2)).has_value());

  SemigroupoidRef p2 = share(catalog::pair_groupoid(2));
  Homomorphism const c = Homomorphism::validate(p2, share(catalog::trivial_monoid()),
                                                {0, 0, 0, 0})
                             .value();
  auto flat = skew_product(c);
  REQUIRE(flat.ok());
  CHECK(find_isomorphism(*flat->semigroupoid, *p2).has_value());
}

TEST_CASE("quotient maps and their kernels") {
  SemigroupoidRef p2 = share(catalog::pair_groupoid(2));
  auto id = quotient_map_and_kernel(BundleCongruence::identity(trivial(p2)));
  CHECK(id.report.passed());
  CHECK(id.kernel.empty());
  CHECK(id.generators.empty());

  // semidirect product of the semilattice example, (1,1_x) ~ (e,1_x)
  auto sd = semidirect_product(*testing::semilattice_on_x()).value();
  BundleRef b = trivial(sd.semigroupoid);
  ArrowId const one_x = sd.arrow_of(0, 0), e_x = sd.arrow_of(1, 0);
  std::vector<std::vector<ArrowId>> classes = {{one_x, e_x}};
  for (ArrowId a = 0; a < sd.semigroupoid->num_arrows(); ++a) {
    if (a != one_x && a != e_x) {
      classes.push_back({a});
    }
  }
  auto rc = RigidCongruence::validate(sd.semigroupoid, classes);
  REQUIRE(rc.ok());
  auto c = BundleCongruence::validate(b, rc.value(), {});
  REQUIRE(c.ok());
  auto k = quotient_map_and_kernel(c.value());
  CHECK(k.report.passed());
  REQUIRE(k.kernel.size() == 1);
  Vector expected(3);
  expected[b->offset(one_x)] = 1;
  expected[b->offset(e_x)]   = -1;
  Submodule span(q, 3);
  span.insert(expected);
  CHECK(span.contains(k.kernel[0]));

  // sign transport on Z2 with u ~ g
  SemigroupoidRef z2 = share(catalog::cyclic_group(2));
  auto rz = RigidCongruence::validate(z2, {{0, 1}}).value();
  auto sign = BundleCongruence::validate(trivial(z2), rz, {{{1, 0}, matrix({{-1}})}});
  REQUIRE(sign.ok());
  auto ks = quotient_map_and_kernel(sign.value());
  CHECK(ks.report.passed());
  REQUIRE(ks.kernel.size() == 1);
  CHECK(ks.kernel[0][0] == ks.kernel[0][1]);

  auto bad = BundleCongruence::validate(trivial(z2), rz, {{{1, 0}, matrix({{2}})}});
  REQUIRE_FALSE(bad.ok());
  CHECK(bad.report().check == "intertwining");

  CHECK_THROWS_AS(quotient_map_and_kernel(BundleCongruence::identity(
                      share(Bundle::trivial(upper_triangular_f2(), z2)))),
                  CapabilityError);
}

TEST_CASE("germ corollary") {
  auto g = germ_corollary(testing::semilattice_on_x(), share(ring_as_algebra(q)));
  REQUIRE(g.ok());
  CHECK(g->report.passed());
  CHECK(g->crossed.algebra->rank() == 3);
  CHECK(g->ideal.size() == 1);
  CHECK(g->target->rank() == 2);

  // empty dom θ_e: no generators, both sides have the crossed product's rank
  InverseSemigroupoidRef s = catalog::as_inverse(catalog::semilattice());
  SemigroupoidRef        u = share(catalog::unit_groupoid({"x", "y"}));
  auto th = std::make_shared<LandPreaction const>(
      LandPreaction::validate(s, u, {{{0, 0}, {1, 1}}, {}}).value());
  auto e = germ_corollary(th, share(ring_as_algebra(q)));
  REQUIRE(e.ok());
  CHECK(e->report.passed());
  CHECK(e->generators.empty());
  CHECK(e->target->rank() == e->crossed.algebra->rank());

  // group action: order is trivial, so the ideal vanishes
  auto grp = germ_corollary(z2_on_point(), share(ring_as_algebra(q)));
  REQUIRE(grp.ok());
  CHECK(grp->report.passed());
  CHECK(grp->ideal.empty());
  CHECK(grp->target->rank() == 2);
}
