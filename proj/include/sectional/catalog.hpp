#ifndef SECTIONAL_CATALOG_HPP_
#define SECTIONAL_CATALOG_HPP_

#include <string>
#include <vector>

#include "semigroupoid.hpp"

// Small named structures used by the tests, benchmarks and fixtures.

namespace sectional::catalog {

  //! One vertex "*", one arrow "1" with 1·1 = 1.
  Semigroupoid trivial_monoid();

  //! Pair groupoid on vertices 1..n: arrow "(i,j)" goes j -> i and
  //! (i,j)(j,k) = (i,k).
  Semigroupoid pair_groupoid(std::size_t n);

  //! Cyclic group of order n on one vertex. For n = 2 the arrows are "u"
  //! and "g"; otherwise "g^0" .. "g^(n-1)".
  Semigroupoid cyclic_group(std::size_t n);

  //! One identity arrow per named vertex and nothing else.
  Semigroupoid unit_groupoid(std::vector<std::string> const& vertices);

  //! Two-element semilattice {1, e} on one vertex: e·e = e, 1 a unit.
  Semigroupoid semilattice();

  //! Klein four-group {u, a, b, c} on one vertex.
  Semigroupoid klein_four();

  //! The same structure with inverses inferred.
  InverseSemigroupoidRef as_inverse(Semigroupoid s);

}  // namespace sectional::catalog

#endif  // SECTIONAL_CATALOG_HPP_
