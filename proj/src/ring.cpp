#include "sectional/ring.hpp"

#include <algorithm>
#include <sstream>

#include <boost/multiprecision/miller_rabin.hpp>

namespace sectional {

  namespace {
    BigInt num(Scalar const& a) {
      return boost::multiprecision::numerator(a);
    }

    BigInt mod_floor(BigInt const& a, BigInt const& n) {
      BigInt r = a % n;
      if (r < 0) {
        r += n;
      }
      return r;
    }

    BigInt ext_gcd_inverse(BigInt const& a, BigInt const& n) {
      BigInt old_r = mod_floor(a, n), r = n;
      BigInt old_s = 1, s = 0;
      while (r != 0) {
        BigInt q = old_r / r;
        BigInt t = old_r - q * r;
        old_r    = r;
        r        = t;
        t        = old_s - q * s;
        old_s    = s;
        s        = t;
      }
      if (old_r != 1) {
        throw CapabilityError("element is not a unit");
      }
      return mod_floor(old_s, n);
    }

    std::string big_to_string(BigInt const& v) {
      std::ostringstream os;
      os << v;
      return os.str();
    }
  }  // namespace

  Ring Ring::integers() {
    Ring r;
    r.kind_ = RingKind::integers;
    return r;
  }

  Ring Ring::rationals() {
    Ring r;
    r.kind_  = RingKind::rationals;
    r.field_ = true;
    return r;
  }

  Ring Ring::integers_mod(BigInt n) {
    if (n < 2) {
      throw InputError("integers-mod-n requires n >= 2");
    }
    Ring r;
    r.kind_    = RingKind::integers_mod;
    r.modulus_ = n;
    r.field_   = boost::multiprecision::miller_rabin_test(n, 25);
    return r;
  }

  Checked<Ring> Ring::from_table(RingTable const& t) {
    std::size_t const k = t.elements.size();
    if (k == 0) {
      return structural_fail("structure", "finite-table ring has no elements");
    }
    auto check_square = [&](std::vector<std::vector<long>> const& tab,
                            char const* name) -> std::optional<ValidationReport> {
      if (tab.size() != k) {
        return structural_fail("structure",
                               std::string(name) + " table is not " + std::to_string(k) + "x"
                                   + std::to_string(k));
      }
      for (std::size_t i = 0; i < k; ++i) {
        if (tab[i].size() != k) {
          return structural_fail("structure",
                                 std::string(name) + " table row " + std::to_string(i)
                                     + " has length " + std::to_string(tab[i].size()));
        }
        for (std::size_t j = 0; j < k; ++j) {
          if (tab[i][j] < 0 || static_cast<std::size_t>(tab[i][j]) >= k) {
            return structural_fail("structure",
                                   std::string(name) + " table refers to unknown element "
                                       + std::to_string(tab[i][j]),
                                   {t.elements[i], t.elements[j]});
          }
        }
      }
      return std::nullopt;
    };
    if (auto e = check_square(t.add, "addition")) {
      return *e;
    }
    if (auto e = check_square(t.mul, "multiplication")) {
      return *e;
    }
    if (t.zero < 0 || static_cast<std::size_t>(t.zero) >= k || t.one < 0
        || static_cast<std::size_t>(t.one) >= k) {
      return structural_fail("structure", "zero or one is not a declared element");
    }

    // Axioms are checked on the input indices so that witnesses use the
    // user's names and order.
    auto A = [&](long a, long b) { return t.add[a][b]; };
    auto M = [&](long a, long b) { return t.mul[a][b]; };
    auto const& nm = t.elements;
    long const  n  = static_cast<long>(k);
    long const  z  = t.zero;
    long const  u  = t.one;

    for (long a = 0; a < n; ++a) {
      for (long b = 0; b < n; ++b) {
        for (long c = 0; c < n; ++c) {
          if (A(A(a, b), c) != A(a, A(b, c))) {
            return fail("additive-associativity",
                        "(" + nm[a] + "+" + nm[b] + ")+" + nm[c] + " ≠ " + nm[a] + "+(" + nm[b]
                            + "+" + nm[c] + ")",
                        {nm[a], nm[b], nm[c]});
          }
        }
      }
    }
    for (long a = 0; a < n; ++a) {
      for (long b = 0; b < n; ++b) {
        if (A(a, b) != A(b, a)) {
          return fail("additive-commutativity",
                      nm[a] + "+" + nm[b] + " ≠ " + nm[b] + "+" + nm[a],
                      {nm[a], nm[b]});
        }
      }
    }
    for (long a = 0; a < n; ++a) {
      if (A(z, a) != a || A(a, z) != a) {
        return fail("additive-identity", nm[z] + "+" + nm[a] + " ≠ " + nm[a], {nm[a]});
      }
    }
    std::vector<std::uint32_t> neg_in(k);
    for (long a = 0; a < n; ++a) {
      long found = -1;
      for (long b = 0; b < n && found < 0; ++b) {
        if (A(a, b) == z) {
          found = b;
        }
      }
      if (found < 0) {
        return fail("additive-inverse", nm[a] + " has no additive inverse", {nm[a]});
      }
      neg_in[a] = static_cast<std::uint32_t>(found);
    }
    for (long a = 0; a < n; ++a) {
      if (M(u, a) != a) {
        return fail("unit-law", nm[u] + "·" + nm[a] + " ≠ " + nm[a], {nm[u], nm[a]});
      }
      if (M(a, u) != a) {
        return fail("unit-law", nm[a] + "·" + nm[u] + " ≠ " + nm[a], {nm[a], nm[u]});
      }
    }
    for (long a = 0; a < n; ++a) {
      for (long b = 0; b < n; ++b) {
        for (long c = 0; c < n; ++c) {
          if (M(M(a, b), c) != M(a, M(b, c))) {
            return fail("multiplicative-associativity",
                        "(" + nm[a] + "·" + nm[b] + ")·" + nm[c] + " ≠ " + nm[a] + "·(" + nm[b]
                            + "·" + nm[c] + ")",
                        {nm[a], nm[b], nm[c]});
          }
        }
      }
    }
    for (long a = 0; a < n; ++a) {
      for (long b = 0; b < n; ++b) {
        for (long c = 0; c < n; ++c) {
          if (M(a, A(b, c)) != A(M(a, b), M(a, c))) {
            return fail("left-distributivity",
                        nm[a] + "·(" + nm[b] + "+" + nm[c] + ") ≠ " + nm[a] + "·" + nm[b] + "+"
                            + nm[a] + "·" + nm[c],
                        {nm[a], nm[b], nm[c]});
          }
          if (M(A(a, b), c) != A(M(a, c), M(b, c))) {
            return fail("right-distributivity",
                        "(" + nm[a] + "+" + nm[b] + ")·" + nm[c] + " ≠ " + nm[a] + "·" + nm[c]
                            + "+" + nm[b] + "·" + nm[c],
                        {nm[a], nm[b], nm[c]});
          }
        }
      }
    }
    bool commutative = true;
    for (long a = 0; a < n && commutative; ++a) {
      for (long b = 0; b < n && commutative; ++b) {
        if (M(a, b) != M(b, a)) {
          commutative = false;
          if (t.commutative) {
            return fail("commutativity",
                        nm[a] + "·" + nm[b] + " ≠ " + nm[b] + "·" + nm[a],
                        {nm[a], nm[b]});
          }
        }
      }
    }

    // Canonical order: zero, one, then the remaining elements as given.
    Ring r;
    r.kind_        = RingKind::table;
    r.commutative_ = commutative;
    r.original_index_.push_back(z);
    if (u != z) {
      r.original_index_.push_back(u);
    }
    for (long a = 0; a < n; ++a) {
      if (a != z && a != u) {
        r.original_index_.push_back(a);
      }
    }
    r.canonical_index_.assign(k, 0);
    for (std::size_t c = 0; c < k; ++c) {
      r.canonical_index_[r.original_index_[c]] = static_cast<std::uint32_t>(c);
    }
    r.names_.resize(k);
    r.add_.resize(k * k);
    r.mul_.resize(k * k);
    r.neg_.resize(k);
    for (std::size_t a = 0; a < k; ++a) {
      long const oa = r.original_index_[a];
      r.names_[a]   = nm[oa];
      r.neg_[a]     = r.canonical_index_[neg_in[oa]];
      for (std::size_t b = 0; b < k; ++b) {
        long const ob    = r.original_index_[b];
        r.add_[a * k + b] = r.canonical_index_[A(oa, ob)];
        r.mul_[a * k + b] = r.canonical_index_[M(oa, ob)];
      }
    }
    r.one_index_ = r.canonical_index_[u];
    return r;
  }

  std::uint32_t Ring::idx(Scalar const& a) const {
    return static_cast<std::uint32_t>(num(a));
  }

  Scalar Ring::one() const {
    if (kind_ == RingKind::table) {
      return Scalar(one_index_);
    }
    return Scalar(1);
  }

  Scalar Ring::from_int(long v) const {
    switch (kind_) {
      case RingKind::integers:
      case RingKind::rationals:
        return Scalar(v);
      case RingKind::integers_mod:
        return Scalar(mod_floor(BigInt(v), modulus_));
      case RingKind::table: {
        // v * 1 by repeated addition
        Scalar acc = zero();
        Scalar step = v >= 0 ? one() : neg(one());
        for (long i = 0; i < (v >= 0 ? v : -v); ++i) {
          acc = add(acc, step);
        }
        return acc;
      }
    }
    return Scalar(0);
  }

  Scalar Ring::add(Scalar const& a, Scalar const& b) const {
    switch (kind_) {
      case RingKind::integers:
      case RingKind::rationals:
        return a + b;
      case RingKind::integers_mod: {
        BigInt s = num(a) + num(b);
        if (s >= modulus_) {
          s -= modulus_;
        }
        return Scalar(s);
      }
      case RingKind::table:
        return Scalar(add_[idx(a) * names_.size() + idx(b)]);
    }
    return a;
  }

  Scalar Ring::neg(Scalar const& a) const {
    switch (kind_) {
      case RingKind::integers:
      case RingKind::rationals:
        return -a;
      case RingKind::integers_mod:
        return a == 0 ? a : Scalar(modulus_ - num(a));
      case RingKind::table:
        return Scalar(neg_[idx(a)]);
    }
    return a;
  }

  Scalar Ring::sub(Scalar const& a, Scalar const& b) const {
    if (kind_ == RingKind::integers || kind_ == RingKind::rationals) {
      return a - b;
    }
    return add(a, neg(b));
  }

  Scalar Ring::mul(Scalar const& a, Scalar const& b) const {
    switch (kind_) {
      case RingKind::integers:
      case RingKind::rationals:
        return a * b;
      case RingKind::integers_mod:
        return Scalar((num(a) * num(b)) % modulus_);
      case RingKind::table:
        return Scalar(mul_[idx(a) * names_.size() + idx(b)]);
    }
    return a;
  }

  void Ring::fma(Scalar& acc, Scalar const& b, Scalar const& c) const {
    if (kind_ == RingKind::integers || kind_ == RingKind::rationals) {
      acc += b * c;
    } else {
      acc = add(acc, mul(b, c));
    }
  }

  bool Ring::is_unit(Scalar const& a) const {
    switch (kind_) {
      case RingKind::integers:
        return a == 1 || a == -1;
      case RingKind::rationals:
        return a != 0;
      case RingKind::integers_mod:
        return boost::multiprecision::gcd(num(a), modulus_) == 1;
      case RingKind::table:
        for (std::size_t b = 0; b < names_.size(); ++b) {
          if (mul(a, Scalar(b)) == one() && mul(Scalar(b), a) == one()) {
            return true;
          }
        }
        return false;
    }
    return false;
  }

  Scalar Ring::inv(Scalar const& a) const {
    switch (kind_) {
      case RingKind::integers:
        if (a == 1 || a == -1) {
          return a;
        }
        break;
      case RingKind::rationals:
        if (a != 0) {
          return Scalar(1) / a;
        }
        break;
      case RingKind::integers_mod:
        return Scalar(ext_gcd_inverse(num(a), modulus_));
      case RingKind::table:
        for (std::size_t b = 0; b < names_.size(); ++b) {
          if (mul(a, Scalar(b)) == one() && mul(Scalar(b), a) == one()) {
            return Scalar(b);
          }
        }
        break;
    }
    throw CapabilityError(to_string(a) + " is not a unit of " + describe());
  }

  BigInt Ring::lift(Scalar const& a) const {
    if (kind_ == RingKind::rationals) {
      throw CapabilityError("no integer lift of a rational");
    }
    return num(a);
  }

  std::string Ring::to_string(Scalar const& a) const {
    if (kind_ == RingKind::table) {
      return names_[idx(a)];
    }
    std::ostringstream os;
    os << a;
    return os.str();
  }

  nlohmann::json Ring::scalar_to_json(Scalar const& a) const {
    if (kind_ == RingKind::table) {
      return names_[idx(a)];
    }
    if (boost::multiprecision::denominator(a) == 1) {
      BigInt const v = num(a);
      if (v >= std::numeric_limits<std::int64_t>::min()
          && v <= std::numeric_limits<std::int64_t>::max()) {
        return static_cast<std::int64_t>(v);
      }
      return big_to_string(v);
    }
    return to_string(a);
  }

  Scalar Ring::scalar_from_json(nlohmann::json const& j) const {
    if (kind_ == RingKind::table) {
      if (j.is_string()) {
        auto it = std::find(names_.begin(), names_.end(), j.get<std::string>());
        if (it == names_.end()) {
          throw InputError("unknown ring element '" + j.get<std::string>() + "'");
        }
        return Scalar(static_cast<long>(it - names_.begin()));
      }
      if (j.is_number_integer()) {
        long const i = j.get<long>();
        if (i < 0 || static_cast<std::size_t>(i) >= canonical_index_.size()) {
          throw InputError("ring element index out of range: " + std::to_string(i));
        }
        return Scalar(canonical_index_[i]);
      }
      throw InputError("ring element must be a name or an index");
    }
    Scalar v;
    if (j.is_number_integer()) {
      v = Scalar(j.get<std::int64_t>());
    } else if (j.is_string()) {
      try {
        v = Scalar(j.get<std::string>());
      } catch (std::exception const&) {
        throw InputError("malformed scalar '" + j.get<std::string>() + "'");
      }
    } else {
      throw InputError("scalar must be an integer or a string, got " + j.dump());
    }
    if (kind_ != RingKind::rationals && boost::multiprecision::denominator(v) != 1) {
      throw InputError("non-integral scalar " + to_string(v) + " for " + describe());
    }
    if (kind_ == RingKind::integers_mod) {
      v = Scalar(mod_floor(num(v), modulus_));
    }
    return v;
  }

  std::string Ring::describe() const {
    switch (kind_) {
      case RingKind::integers:
        return "Z";
      case RingKind::rationals:
        return "Q";
      case RingKind::integers_mod:
        return "Z/" + big_to_string(modulus_);
      case RingKind::table:
        return "table ring of order " + std::to_string(names_.size());
    }
    return "?";
  }

  nlohmann::json Ring::to_json() const {
    nlohmann::json j;
    switch (kind_) {
      case RingKind::integers:
        j["kind"] = "z";
        break;
      case RingKind::rationals:
        j["kind"] = "q";
        break;
      case RingKind::integers_mod:
        j["kind"] = "zmod";
        if (modulus_ <= std::numeric_limits<std::int64_t>::max()) {
          j["n"] = static_cast<std::int64_t>(modulus_);
        } else {
          j["n"] = big_to_string(modulus_);
        }
        break;
      case RingKind::table: {
        std::size_t const k = names_.size();
        j["kind"]           = "table";
        j["elements"]       = names_;
        auto tab            = [&](std::vector<std::uint32_t> const& t) {
          nlohmann::json rows = nlohmann::json::array();
          for (std::size_t a = 0; a < k; ++a) {
            nlohmann::json row = nlohmann::json::array();
            for (std::size_t b = 0; b < k; ++b) {
              row.push_back(t[a * k + b]);
            }
            rows.push_back(row);
          }
          return rows;
        };
        j["add"]         = tab(add_);
        j["mul"]         = tab(mul_);
        j["zero"]        = 0;
        j["one"]         = one_index_;
        j["commutative"] = commutative_;
        break;
      }
    }
    return j;
  }

  bool Ring::operator==(Ring const& o) const {
    return kind_ == o.kind_ && modulus_ == o.modulus_ && names_ == o.names_ && add_ == o.add_
           && mul_ == o.mul_ && one_index_ == o.one_index_;
  }

  Checked<Ring> ring_from_json(nlohmann::json const& j) {
    if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string()) {
      return structural_fail("structure", "ring literal needs a string 'kind'");
    }
    std::string const kind = j["kind"].get<std::string>();
    if (kind == "z") {
      return Ring::integers();
    }
    if (kind == "q") {
      return Ring::rationals();
    }
    if (kind == "zmod") {
      if (!j.contains("n")) {
        return structural_fail("structure", "zmod ring needs 'n'");
      }
      BigInt n = j["n"].is_string() ? BigInt(j["n"].get<std::string>())
                                    : BigInt(j["n"].get<std::int64_t>());
      if (n < 2) {
        return structural_fail("structure", "zmod ring needs n >= 2");
      }
      return Ring::integers_mod(n);
    }
    if (kind == "table") {
      RingTable t;
      try {
        for (auto const& e : j.at("elements")) {
          t.elements.push_back(e.is_string() ? e.get<std::string>() : e.dump());
        }
        auto index_of = [&](nlohmann::json const& e) -> long {
          if (e.is_number_integer()) {
            return e.get<long>();
          }
          if (e.is_string()) {
            auto it = std::find(t.elements.begin(), t.elements.end(), e.get<std::string>());
            return it == t.elements.end() ? -1 : static_cast<long>(it - t.elements.begin());
          }
          return -1;
        };
        auto read_table = [&](nlohmann::json const& tab) {
          std::vector<std::vector<long>> out;
          for (auto const& row : tab) {
            std::vector<long> r;
            for (auto const& e : row) {
              r.push_back(index_of(e));
            }
            out.push_back(std::move(r));
          }
          return out;
        };
        t.add         = read_table(j.at("add"));
        t.mul         = read_table(j.at("mul"));
        t.zero        = index_of(j.at("zero"));
        t.one         = index_of(j.at("one"));
        t.commutative = j.value("commutative", false);
      } catch (nlohmann::json::exception const& e) {
        return structural_fail("structure", std::string("malformed table ring: ") + e.what());
      }
      return Ring::from_table(t);
    }
    return structural_fail("structure", "unknown ring kind '" + kind + "'");
  }

  Ring ring_from_override(std::string const& text) {
    if (text == "q") {
      return Ring::rationals();
    }
    if (text == "z") {
      return Ring::integers();
    }
    if (text.rfind("zmod:", 0) == 0) {
      try {
        return Ring::integers_mod(BigInt(text.substr(5)));
      } catch (std::runtime_error const&) {
        throw InputError("bad ring override '" + text + "'");
      }
    }
    throw InputError("bad ring override '" + text + "' (expected q, z or zmod:N)");
  }

  Vector zero_vector(std::size_t n) {
    return Vector(n);
  }

  bool is_zero_vector(Vector const& v) {
    return std::all_of(v.begin(), v.end(), [](Scalar const& x) { return x == 0; });
  }

  Vector add(Ring const& r, Vector const& a, Vector const& b) {
    Vector out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      out[i] = r.add(a[i], b[i]);
    }
    return out;
  }

  Vector sub(Ring const& r, Vector const& a, Vector const& b) {
    Vector out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      out[i] = r.sub(a[i], b[i]);
    }
    return out;
  }

  Vector scale(Ring const& r, Scalar const& c, Vector const& v) {
    Vector out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
      out[i] = r.mul(c, v[i]);
    }
    return out;
  }

}  // namespace sectional
