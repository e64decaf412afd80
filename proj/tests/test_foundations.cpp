#include <doctest.h>

#include <random>

#include "support.hpp"

using namespace sectional;

TEST_CASE("Z/n residues stay canonical") {
  Ring const r = Ring::integers_mod(6);
  CHECK(r.add(Scalar(5), Scalar(4)) == Scalar(3));
  CHECK(r.neg(Scalar(1)) == Scalar(5));
  CHECK(r.mul(Scalar(4), Scalar(3)) == Scalar(0));
  CHECK(r.is_unit(Scalar(5)));
  CHECK_FALSE(r.is_unit(Scalar(2)));
  CHECK(r.mul(r.inv(Scalar(5)), Scalar(5)) == r.one());
  CHECK(r.scalar_from_json(-1) == Scalar(5));
}

TEST_CASE("finite table ring: Z/2 × Z/2 as a table, and a broken distributive law") {
  RingTable t;
  t.elements    = {"0", "1", "a", "b"};
  t.add         = {{0, 1, 2, 3}, {1, 0, 3, 2}, {2, 3, 0, 1}, {3, 2, 1, 0}};
  t.mul         = {{0, 0, 0, 0}, {0, 1, 2, 3}, {0, 2, 2, 0}, {0, 3, 0, 3}};
  t.zero        = 0;
  t.one         = 1;
  t.commutative = true;
  auto ring     = Ring::from_table(t);
  REQUIRE(ring.ok());
  CHECK(ring->is_commutative());
  CHECK_FALSE(ring->is_field());

  t.mul[2][3] = 2;
  t.mul[3][2] = 2;
  auto broken = Ring::from_table(t);
  REQUIRE_FALSE(broken.ok());
  CHECK(broken.report().witness.size() == 3);
}

TEST_CASE("kernel over Z/6 agrees with exhaustive enumeration") {
  Ring const r = Ring::integers_mod(6);
  Matrix     m(2, 3);
  m.at(0, 0) = 2;
  m.at(0, 1) = 3;
  m.at(0, 2) = 0;
  m.at(1, 0) = 0;
  m.at(1, 1) = 3;
  m.at(1, 2) = 4;
  std::size_t brute = 0;
  for (int a = 0; a < 6; ++a) {
    for (int b = 0; b < 6; ++b) {
      for (int c = 0; c < 6; ++c) {
        brute += is_zero_vector(m.apply(r, {Scalar(a), Scalar(b), Scalar(c)}));
      }
    }
  }
  Submodule k(r, 3);
  for (auto const& v : solve_linear(m, r).kernel) {
    CHECK(is_zero_vector(m.apply(r, v)));
    k.insert(v);
  }
  CHECK(k.cardinality() == BigInt(brute));
}

TEST_CASE("kernel over Q and Z: rank + nullity, kernel vectors annihilated") {
  std::mt19937_64 gen(3);
  for (Ring const& r : {Ring::rationals(), Ring::integers()}) {
    for (int trial = 0; trial < 20; ++trial) {
      Matrix m(3, 5);
      for (auto& x : m.data) {
        x = static_cast<long>(gen() % 5) - 2;
      }
      auto const sol = solve_linear(m, r);
      CHECK(sol.rank + sol.kernel.size() == 5);
      for (auto const& v : sol.kernel) {
        CHECK(is_zero_vector(m.apply(r, v)));
      }
    }
  }
}

TEST_CASE("Smith normal form diagonal divides down the chain") {
  auto s = smith_normal_form({{2, 4, 4}, {-6, 6, 12}, {10, -4, -16}}, 3);
  REQUIRE(s.diagonal.size() == 3);
  CHECK(s.diagonal[0] == 2);
  CHECK(s.diagonal[1] == 6);
  CHECK(s.diagonal[2] == 12);
}

TEST_CASE("serial and OpenMP associativity kernels return the same witness") {
  std::mt19937_64 gen(11);
  for (int trial = 0; trial < 200; ++trial) {
    std::size_t const          n = 2 + gen() % 4;
    std::vector<std::uint32_t> prod(n * n);
    for (auto& p : prod) {
      p = static_cast<std::uint32_t>(gen() % n);
    }
    CHECK(kernels::associativity_failure_serial(n, prod)
          == kernels::associativity_failure_parallel(n, prod));
  }
}

TEST_CASE("serial and OpenMP algebra kernels agree on random constants") {
  std::mt19937_64 gen(5);
  Ring const      r = Ring::integers_mod(3);
  for (int trial = 0; trial < 50; ++trial) {
    StructureConstants sc;
    sc.n = 3;
    for (std::size_t k = 0; k < 9; ++k) {
      Vector v(3);
      for (auto& x : v) {
        x = static_cast<long>(gen() % 3);
      }
      sc.table.push_back(to_sparse(v));
    }
    CHECK(kernels::algebra_associativity_failure_serial(r, sc)
          == kernels::algebra_associativity_failure_parallel(r, sc));
  }
}

TEST_CASE("corpus structures validate") {
  for (auto const& s : testing::corpus()) {
    CAPTURE(s.id());
    CHECK(Semigroupoid::validate(s.tables()).ok());
    CHECK(InverseSemigroupoid::infer(share(s)).ok());
  }
}

TEST_CASE("single-entry perturbations are rejected with the oracle's witness") {
  auto const ps = testing::perturbations(10);
  REQUIRE(ps.size() == 10);
  for (auto const& p : ps) {
    CAPTURE(p.name);
    auto r = Semigroupoid::validate(p.tables);
    REQUIRE_FALSE(r.ok());
    CHECK(r.report().check == p.expected.check);
    CHECK(r.report().witness == p.expected.witness);
  }
}

TEST_CASE("natural order on the semilattice and the Klein group") {
  auto s = catalog::as_inverse(catalog::semilattice());
  ArrowId const one = s->base().arrow("1"), e = s->base().arrow("e");
  CHECK(s->leq(e, one));
  CHECK_FALSE(s->leq(one, e));
  for (int c = 1; c <= 4; ++c) {
    CHECK(s->leq_by(c, e, one));
    CHECK_FALSE(s->leq_by(c, one, e));
  }
  auto k = catalog::as_inverse(catalog::klein_four());
  for (ArrowId a = 0; a < 4; ++a) {
    for (ArrowId b = 0; b < 4; ++b) {
      CHECK(k->leq(a, b) == (a == b));
    }
  }
}

TEST_CASE("groupoid recognition") {
  CHECK(is_groupoid(catalog::pair_groupoid(3)).ok);
  CHECK(is_groupoid(catalog::klein_four()).ok);
  CHECK_FALSE(is_groupoid(catalog::semilattice()).ok);
}
