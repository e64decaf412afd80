#ifndef SECTIONAL_RING_HPP_
#define SECTIONAL_RING_HPP_

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>
#include <json.hpp>

#include "errors.hpp"

namespace sectional {

  using BigInt = boost::multiprecision::cpp_int;
  using BigRat = boost::multiprecision::cpp_rational;

  // Every ring element is carried as an exact rational; the owning Ring
  // decides how to read it. Integers and residues are integral values (a
  // residue mod n is kept in [0, n)), elements of a finite-table ring are
  // the integral index of the element in the ring's canonical order, in
  // which the zero comes first. Hence a value-initialised Scalar is always
  // the zero of its ring.
  using Scalar = BigRat;
  using Vector = std::vector<Scalar>;

  enum class RingKind { integers, rationals, integers_mod, table };

  //! Raw finite-table ring as read from a structure file. Entries of the
  //! tables are indices into `elements`.
  struct RingTable {
    std::vector<std::string>      elements;
    std::vector<std::vector<long>> add;
    std::vector<std::vector<long>> mul;
    long                          zero = 0;
    long                          one  = 0;
    bool                          commutative = false;
  };

  class Ring {
   public:
    static Ring integers();
    static Ring rationals();
    static Ring integers_mod(BigInt n);

    //! Builds and validates a finite-table ring. Structural problems (ragged
    //! tables, out-of-range entries) are reported with `structural` set;
    //! axiom failures carry a witness triple.
    static Checked<Ring> from_table(RingTable const& table);

    RingKind kind() const noexcept {
      return kind_;
    }
    BigInt const& modulus() const noexcept {
      return modulus_;
    }
    std::size_t table_size() const noexcept {
      return names_.size();
    }
    bool is_commutative() const noexcept {
      return commutative_;
    }
    //! Q or Z/p with p prime.
    bool is_field() const noexcept {
      return field_;
    }
    //! Whether kernels, spans and ideal closures are computable.
    bool supports_linear_algebra() const noexcept {
      return kind_ != RingKind::table;
    }

    Scalar zero() const {
      return Scalar(0);
    }
    Scalar one() const;
    Scalar from_int(long v) const;

    Scalar add(Scalar const& a, Scalar const& b) const;
    Scalar sub(Scalar const& a, Scalar const& b) const;
    Scalar neg(Scalar const& a) const;
    Scalar mul(Scalar const& a, Scalar const& b) const;
    //! Multiplicative inverse; CapabilityError when `a` is not a unit.
    Scalar inv(Scalar const& a) const;
    bool   is_unit(Scalar const& a) const;

    bool is_zero(Scalar const& a) const {
      return a == 0;
    }
    bool equal(Scalar const& a, Scalar const& b) const {
      return a == b;
    }

    //! a += b * c, the inner step of every product loop.
    void fma(Scalar& acc, Scalar const& b, Scalar const& c) const;

    std::string    to_string(Scalar const& a) const;
    nlohmann::json scalar_to_json(Scalar const& a) const;
    Scalar         scalar_from_json(nlohmann::json const& j) const;

    std::string    describe() const;
    nlohmann::json to_json() const;

    bool operator==(Ring const& other) const;

    //! Canonical representative of an integer lift (used by the Smith form
    //! route over Z/n).
    BigInt lift(Scalar const& a) const;

   private:
    Ring() = default;

    RingKind                      kind_ = RingKind::integers;
    BigInt                        modulus_{0};
    bool                          commutative_ = true;
    bool                          field_       = false;
    std::vector<std::string>      names_;  // canonical order, zero first
    std::vector<std::uint32_t>    add_;    // k*k
    std::vector<std::uint32_t>    mul_;    // k*k
    std::vector<std::uint32_t>    neg_;
    std::uint32_t                 one_index_ = 0;
    std::vector<long>             original_index_;  // canonical -> input
    std::vector<std::uint32_t>    canonical_index_; // input -> canonical

    std::uint32_t idx(Scalar const& a) const;
  };

  //! Ring literal as used in structure files: {"kind": "zmod", "n": 5}, ...
  Checked<Ring> ring_from_json(nlohmann::json const& j);

  //! Compact override syntax for the command line: "q", "z", "zmod:5".
  Ring ring_from_override(std::string const& text);

  // Vector helpers over a ring.
  Vector zero_vector(std::size_t n);
  bool   is_zero_vector(Vector const& v);
  Vector add(Ring const& r, Vector const& a, Vector const& b);
  Vector sub(Ring const& r, Vector const& a, Vector const& b);
  Vector scale(Ring const& r, Scalar const& c, Vector const& v);

}  // namespace sectional

#endif  // SECTIONAL_RING_HPP_
