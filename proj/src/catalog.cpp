#include "sectional/catalog.hpp"

namespace sectional::catalog {

  Semigroupoid trivial_monoid() {
    auto t = make_tables("1", {"*"}, {"1"}, {0}, {0}, [](ArrowId, ArrowId) { return ArrowId{0}; });
    return Semigroupoid::validate(std::move(t)).value();
  }

  Semigroupoid pair_groupoid(std::size_t n) {
    std::vector<std::string> vertices, arrows;
    std::vector<VertexId>    src, rng;
    for (std::size_t i = 0; i < n; ++i) {
      vertices.push_back(std::to_string(i + 1));
    }
    // arrow (i,j) has id i*n + j
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        arrows.push_back("(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")");
        src.push_back(static_cast<VertexId>(j));
        rng.push_back(static_cast<VertexId>(i));
      }
    }
    auto t = make_tables("P" + std::to_string(n), std::move(vertices), std::move(arrows),
                         std::move(src), std::move(rng), [n](ArrowId a, ArrowId b) {
                           return static_cast<ArrowId>((a / n) * n + b % n);
                         });
    return Semigroupoid::validate(std::move(t)).value();
  }

  Semigroupoid cyclic_group(std::size_t n) {
    std::vector<std::string> arrows;
    for (std::size_t k = 0; k < n; ++k) {
      if (n == 2) {
        arrows.push_back(k == 0 ? "u" : "g");
      } else {
        arrows.push_back("g^" + std::to_string(k));
      }
    }
    auto t = make_tables("Z" + std::to_string(n), {"*"}, std::move(arrows),
                         std::vector<VertexId>(n, 0), std::vector<VertexId>(n, 0),
                         [n](ArrowId a, ArrowId b) { return static_cast<ArrowId>((a + b) % n); });
    return Semigroupoid::validate(std::move(t)).value();
  }

  Semigroupoid unit_groupoid(std::vector<std::string> const& vertices) {
    std::vector<std::string> arrows;
    std::vector<VertexId>    ends;
    for (std::size_t v = 0; v < vertices.size(); ++v) {
      arrows.push_back("1_" + vertices[v]);
      ends.push_back(static_cast<VertexId>(v));
    }
    auto t = make_tables("X", vertices, std::move(arrows), ends, ends,
                         [](ArrowId a, ArrowId) { return a; });
    return Semigroupoid::validate(std::move(t)).value();
  }

  Semigroupoid semilattice() {
    // 1 = arrow 0, e = arrow 1
    auto t = make_tables("E", {"*"}, {"1", "e"}, {0, 0}, {0, 0},
                         [](ArrowId a, ArrowId b) { return static_cast<ArrowId>(a | b); });
    return Semigroupoid::validate(std::move(t)).value();
  }

  Semigroupoid klein_four() {
    auto t = make_tables("V4", {"*"}, {"u", "a", "b", "c"}, {0, 0, 0, 0}, {0, 0, 0, 0},
                         [](ArrowId a, ArrowId b) { return static_cast<ArrowId>(a ^ b); });
    return Semigroupoid::validate(std::move(t)).value();
  }

  InverseSemigroupoidRef as_inverse(Semigroupoid s) {
    return std::make_shared<InverseSemigroupoid const>(
        InverseSemigroupoid::infer(share(std::move(s))).value());
  }

}  // namespace sectional::catalog
