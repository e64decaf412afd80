#include "sectional/semigroupoid.hpp"

#include <algorithm>
#include <set>

namespace sectional {

  namespace {
    std::string dup_name(std::vector<std::string> const& names) {
      std::set<std::string> seen;
      for (auto const& n : names) {
        if (!seen.insert(n).second) {
          return n;
        }
      }
      return {};
    }
  }  // namespace

  Checked<Semigroupoid> Semigroupoid::validate(SemigroupoidTables t, ExecPolicy policy) {
    std::size_t const n  = t.arrow_names.size();
    std::size_t const nv = t.vertex_names.size();
    if (t.src.size() != n || t.rng.size() != n) {
      return structural_fail("structure", "source/range tables do not cover every arrow");
    }
    if (t.prod.size() != n * n) {
      return structural_fail("structure", "product table is not arrows x arrows");
    }
    if (auto d = dup_name(t.arrow_names); !d.empty()) {
      return structural_fail("structure", "duplicate arrow id '" + d + "'", {d});
    }
    if (auto d = dup_name(t.vertex_names); !d.empty()) {
      return structural_fail("structure", "duplicate vertex id '" + d + "'", {d});
    }
    for (ArrowId a = 0; a < n; ++a) {
      if (t.src[a] >= nv || t.rng[a] >= nv) {
        return structural_fail("structure", "arrow '" + t.arrow_names[a] + "' has an unknown endpoint",
                               {t.arrow_names[a]});
      }
    }
    for (std::size_t k = 0; k < n * n; ++k) {
      if (t.prod[k] != kNoArrow && t.prod[k] >= n) {
        return structural_fail("structure", "product table refers to an unknown arrow",
                               {t.arrow_names[k / n], t.arrow_names[k % n]});
      }
    }

    auto const& nm = t.arrow_names;
    for (ArrowId a = 0; a < n; ++a) {
      for (ArrowId b = 0; b < n; ++b) {
        if (t.src[a] == t.rng[b] && t.prod[a * n + b] == kNoArrow) {
          return fail("composable-product",
                      "(" + nm[a] + "," + nm[b] + ") is composable but has no product",
                      {nm[a], nm[b]});
        }
      }
    }
    for (ArrowId a = 0; a < n; ++a) {
      for (ArrowId b = 0; b < n; ++b) {
        if (t.src[a] != t.rng[b] && t.prod[a * n + b] != kNoArrow) {
          return fail("non-composable-product",
                      nm[a] + "·" + nm[b] + " is defined but src(" + nm[a] + ") ≠ rng(" + nm[b]
                          + ")",
                      {nm[a], nm[b]});
        }
      }
    }
    for (ArrowId a = 0; a < n; ++a) {
      for (ArrowId b = 0; b < n; ++b) {
        ArrowId const ab = t.prod[a * n + b];
        if (ab == kNoArrow) {
          continue;
        }
        if (t.rng[ab] != t.rng[a]) {
          return fail("range-compatibility",
                      "rng(" + nm[a] + "·" + nm[b] + ") = " + t.vertex_names[t.rng[ab]] + " ≠ "
                          + t.vertex_names[t.rng[a]] + " = rng(" + nm[a] + ")",
                      {nm[a], nm[b]});
        }
        if (t.src[ab] != t.src[b]) {
          return fail("source-compatibility",
                      "src(" + nm[a] + "·" + nm[b] + ") = " + t.vertex_names[t.src[ab]] + " ≠ "
                          + t.vertex_names[t.src[b]] + " = src(" + nm[b] + ")",
                      {nm[a], nm[b]});
        }
      }
    }
    if (auto w = kernels::associativity_failure(n, t.prod, policy)) {
      auto [a, b, c] = *w;
      return fail("associativity",
                  "(" + nm[a] + "·" + nm[b] + ")·" + nm[c] + " ≠ " + nm[a] + "·(" + nm[b] + "·"
                      + nm[c] + ")",
                  {nm[a], nm[b], nm[c]});
    }

    Semigroupoid s;
    s.t_ = std::move(t);
    for (ArrowId a = 0; a < n; ++a) {
      for (ArrowId b = 0; b < n; ++b) {
        if (s.t_.prod[a * n + b] != kNoArrow) {
          s.pairs_.emplace_back(a, b);
        }
      }
    }
    return s;
  }

  std::optional<ArrowId> Semigroupoid::find_arrow(std::string const& name) const {
    auto it = std::find(t_.arrow_names.begin(), t_.arrow_names.end(), name);
    if (it == t_.arrow_names.end()) {
      return std::nullopt;
    }
    return static_cast<ArrowId>(it - t_.arrow_names.begin());
  }

  std::optional<VertexId> Semigroupoid::find_vertex(std::string const& name) const {
    auto it = std::find(t_.vertex_names.begin(), t_.vertex_names.end(), name);
    if (it == t_.vertex_names.end()) {
      return std::nullopt;
    }
    return static_cast<VertexId>(it - t_.vertex_names.begin());
  }

  ArrowId Semigroupoid::arrow(std::string const& name) const {
    if (auto a = find_arrow(name)) {
      return *a;
    }
    throw InputError("semigroupoid '" + t_.id + "' has no arrow '" + name + "'");
  }

  Semigroupoid Semigroupoid::renamed(std::string id) const {
    Semigroupoid s = *this;
    s.t_.id        = std::move(id);
    return s;
  }

  nlohmann::json Semigroupoid::to_json() const {
    nlohmann::json j;
    j["id"]       = t_.id;
    j["vertices"] = t_.vertex_names;
    j["arrows"]   = nlohmann::json::array();
    for (ArrowId a = 0; a < num_arrows(); ++a) {
      j["arrows"].push_back({{"id", t_.arrow_names[a]},
                             {"src", t_.vertex_names[t_.src[a]]},
                             {"rng", t_.vertex_names[t_.rng[a]]}});
    }
    j["prod"] = nlohmann::json::array();
    for (auto [a, b] : pairs_) {
      j["prod"].push_back({t_.arrow_names[a], t_.arrow_names[b], t_.arrow_names[prod(a, b)]});
    }
    return j;
  }

  bool Semigroupoid::operator==(Semigroupoid const& o) const {
    return t_.vertex_names == o.t_.vertex_names && t_.arrow_names == o.t_.arrow_names
           && t_.src == o.t_.src && t_.rng == o.t_.rng && t_.prod == o.t_.prod;
  }

  // ---------------------------------------------------------------------------

  namespace {
    bool is_inverse_pair(Semigroupoid const& s, ArrowId a, ArrowId t) {
      if (s.src(t) != s.rng(a) || s.rng(t) != s.src(a)) {
        return false;
      }
      ArrowId const at = s.prod(a, t);
      ArrowId const ta = s.prod(t, a);
      return s.prod(at, a) == a && s.prod(ta, t) == t;
    }
  }  // namespace

  bool InverseSemigroupoid::leq_by(int characterization, ArrowId s, ArrowId t) const {
    Semigroupoid const& b = *base_;
    auto mul = [&](ArrowId x, ArrowId y) {
      return (x == kNoArrow || y == kNoArrow || !b.composable(x, y)) ? kNoArrow : b.prod(x, y);
    };
    ArrowId const ss = inv_[s];
    switch (characterization) {
      case 1:
        return mul(mul(t, ss), s) == s;
      case 2:
        return std::any_of(idempotents_.begin(), idempotents_.end(),
                           [&](ArrowId e) { return mul(t, e) == s; });
      case 3:
        return mul(mul(s, ss), t) == s;
      case 4:
        return std::any_of(idempotents_.begin(), idempotents_.end(),
                           [&](ArrowId f) { return mul(f, t) == s; });
      default:
        throw std::invalid_argument("order characterization must be 1..4");
    }
  }

  Checked<InverseSemigroupoid> InverseSemigroupoid::validate(SemigroupoidRef      base,
                                                             std::vector<ArrowId> inv) {
    Semigroupoid const& b = *base;
    std::size_t const   n = b.num_arrows();
    if (inv.size() != n) {
      return structural_fail("structure", "inverse table does not cover every arrow");
    }
    for (ArrowId s = 0; s < n; ++s) {
      if (inv[s] >= n) {
        return structural_fail("structure", "inverse of '" + b.arrow_name(s) + "' is unknown",
                               {b.arrow_name(s)});
      }
    }
    auto nm = [&](ArrowId a) { return b.arrow_name(a); };

    for (ArrowId s = 0; s < n; ++s) {
      if (!is_inverse_pair(b, s, inv[s])) {
        return fail("inverse",
                    nm(inv[s]) + " is not an inverse of " + nm(s)
                        + " (needs src/rng swapped, s·t·s = s and t·s·t = t)",
                    {nm(s), nm(inv[s])});
      }
    }
    for (ArrowId s = 0; s < n; ++s) {
      for (ArrowId t = 0; t < n; ++t) {
        if (t != inv[s] && is_inverse_pair(b, s, t)) {
          return fail("inverse-uniqueness",
                      nm(s) + " has two inverses " + nm(inv[s]) + " and " + nm(t),
                      {nm(s), nm(inv[s]), nm(t)});
        }
      }
    }
    for (ArrowId s = 0; s < n; ++s) {
      if (inv[inv[s]] != s) {
        return fail("involution", "(" + nm(s) + "*)* ≠ " + nm(s), {nm(s)});
      }
    }
    for (auto [s, t] : b.composable_pairs()) {
      if (inv[b.prod(s, t)] != b.prod(inv[t], inv[s])) {
        return fail("anti-multiplicativity",
                    "(" + nm(s) + "·" + nm(t) + ")* ≠ " + nm(t) + "*·" + nm(s) + "*",
                    {nm(s), nm(t)});
      }
    }

    InverseSemigroupoid r;
    r.base_ = std::move(base);
    r.inv_  = std::move(inv);
    r.idempotent_.assign(n, false);
    for (ArrowId e = 0; e < n; ++e) {
      if (b.src(e) == b.rng(e) && b.prod(e, e) == e) {
        r.idempotent_[e] = true;
        r.idempotents_.push_back(e);
      }
    }
    for (ArrowId e : r.idempotents_) {
      for (ArrowId f : r.idempotents_) {
        if (b.composable(e, f) && (!b.composable(f, e) || b.prod(e, f) != b.prod(f, e))) {
          return fail("idempotents-commute", nm(e) + "·" + nm(f) + " ≠ " + nm(f) + "·" + nm(e),
                      {nm(e), nm(f)});
        }
      }
    }

    r.order_.assign(n * n, false);
    for (ArrowId s = 0; s < n; ++s) {
      for (ArrowId t = 0; t < n; ++t) {
        bool const v1 = r.leq_by(1, s, t);
        for (int k = 2; k <= 4; ++k) {
          if (r.leq_by(k, s, t) != v1) {
            throw InternalError("natural order characterizations 1 and " + std::to_string(k)
                                + " disagree on (" + nm(s) + ", " + nm(t) + ")");
          }
        }
        r.order_[s * n + t] = v1;
      }
    }
    for (ArrowId s = 0; s < n; ++s) {
      for (ArrowId t = 0; t < n; ++t) {
        if (r.leq(s, t) != r.leq(r.inv_[s], r.inv_[t])) {
          return fail("order-compatibility", nm(s) + " ≤ " + nm(t) + " is not preserved by *",
                      {nm(s), nm(t)});
        }
      }
    }
    for (auto [s1, s2] : b.composable_pairs()) {
      for (ArrowId t1 = 0; t1 < n; ++t1) {
        if (!r.leq(s1, t1)) {
          continue;
        }
        for (ArrowId t2 = 0; t2 < n; ++t2) {
          if (r.leq(s2, t2) && !r.leq(b.prod(s1, s2), b.prod(t1, t2))) {
            return fail("order-compatibility",
                        nm(s1) + "·" + nm(s2) + " ≰ " + nm(t1) + "·" + nm(t2),
                        {nm(s1), nm(s2), nm(t1), nm(t2)});
          }
        }
      }
    }
    return r;
  }

  Checked<InverseSemigroupoid> InverseSemigroupoid::infer(SemigroupoidRef base) {
    Semigroupoid const&  b = *base;
    std::vector<ArrowId> inv(b.num_arrows(), kNoArrow);
    for (ArrowId s = 0; s < b.num_arrows(); ++s) {
      for (ArrowId t = 0; t < b.num_arrows(); ++t) {
        if (!is_inverse_pair(b, s, t)) {
          continue;
        }
        if (inv[s] != kNoArrow) {
          return fail("inverse-uniqueness",
                      b.arrow_name(s) + " has two inverses " + b.arrow_name(inv[s]) + " and "
                          + b.arrow_name(t),
                      {b.arrow_name(s), b.arrow_name(inv[s]), b.arrow_name(t)});
        }
        inv[s] = t;
      }
      if (inv[s] == kNoArrow) {
        return fail("inverse", b.arrow_name(s) + " has no inverse", {b.arrow_name(s)});
      }
    }
    return validate(std::move(base), std::move(inv));
  }

  // ---------------------------------------------------------------------------

  Checked<Homomorphism> Homomorphism::validate(SemigroupoidRef source, SemigroupoidRef target,
                                               std::vector<ArrowId> map, std::string id) {
    Semigroupoid const& s = *source;
    Semigroupoid const& t = *target;
    if (map.size() != s.num_arrows()) {
      return structural_fail("structure", "homomorphism map does not cover every source arrow");
    }
    for (ArrowId a = 0; a < map.size(); ++a) {
      if (map[a] >= t.num_arrows()) {
        return structural_fail("structure",
                               "image of '" + s.arrow_name(a) + "' is not a target arrow",
                               {s.arrow_name(a)});
      }
    }
    for (auto [a, b] : s.composable_pairs()) {
      if (!t.composable(map[a], map[b]) || t.prod(map[a], map[b]) != map[s.prod(a, b)]) {
        return fail("homomorphism",
                    "φ(" + s.arrow_name(a) + "·" + s.arrow_name(b) + ") ≠ φ(" + s.arrow_name(a)
                        + ")·φ(" + s.arrow_name(b) + ")",
                    {s.arrow_name(a), s.arrow_name(b)});
      }
    }
    Homomorphism h;
    h.id_     = std::move(id);
    h.source_ = std::move(source);
    h.target_ = std::move(target);
    h.map_    = std::move(map);
    for (ArrowId a = 0; a < s.num_arrows() && !h.non_rigid_; ++a) {
      for (ArrowId b = 0; b < s.num_arrows(); ++b) {
        if (!s.composable(a, b) && t.composable(h.map_[a], h.map_[b])) {
          h.non_rigid_ = std::make_pair(a, b);
          break;
        }
      }
    }
    return h;
  }

  ValidationReport Homomorphism::rigidity_report() const {
    if (!non_rigid_) {
      throw std::logic_error("rigidity_report() on a rigid homomorphism");
    }
    auto [a, b] = *non_rigid_;
    return fail("rigidity",
                "(" + source_->arrow_name(a) + "," + source_->arrow_name(b)
                    + ") is not composable but its image is",
                {source_->arrow_name(a), source_->arrow_name(b)});
  }

  Homomorphism Homomorphism::identity(SemigroupoidRef s) {
    std::vector<ArrowId> map(s->num_arrows());
    for (ArrowId a = 0; a < map.size(); ++a) {
      map[a] = a;
    }
    return validate(s, s, std::move(map), "id").value();
  }

  // ---------------------------------------------------------------------------

  Semigroupoid direct_product(Semigroupoid const& a, Semigroupoid const& b) {
    std::size_t const        na = a.num_arrows(), nb = b.num_arrows();
    std::size_t const        va = a.num_vertices(), vb = b.num_vertices();
    std::vector<std::string> vertices, arrows;
    std::vector<VertexId>    src, rng;
    for (VertexId v = 0; v < va; ++v) {
      for (VertexId w = 0; w < vb; ++w) {
        vertices.push_back("(" + a.vertex_name(v) + "," + b.vertex_name(w) + ")");
      }
    }
    for (ArrowId x = 0; x < na; ++x) {
      for (ArrowId y = 0; y < nb; ++y) {
        arrows.push_back("(" + a.arrow_name(x) + "," + b.arrow_name(y) + ")");
        src.push_back(static_cast<VertexId>(a.src(x) * vb + b.src(y)));
        rng.push_back(static_cast<VertexId>(a.rng(x) * vb + b.rng(y)));
      }
    }
    auto t = make_tables(a.id() + "×" + b.id(), std::move(vertices), std::move(arrows),
                         std::move(src), std::move(rng), [&](ArrowId p, ArrowId q) {
                           ArrowId const x = a.prod(p / nb, q / nb);
                           ArrowId const y = b.prod(p % nb, q % nb);
                           return static_cast<ArrowId>(x * nb + y);
                         });
    return Semigroupoid::validate(std::move(t)).value();
  }

  GroupoidCheck is_groupoid(Semigroupoid const& s) {
    GroupoidCheck     g;
    std::size_t const n = s.num_arrows();
    g.unit.assign(s.num_vertices(), kNoArrow);
    for (VertexId v = 0; v < s.num_vertices(); ++v) {
      for (ArrowId u = 0; u < n && g.unit[v] == kNoArrow; ++u) {
        if (s.src(u) != v || s.rng(u) != v) {
          continue;
        }
        bool is_unit = true;
        for (ArrowId a = 0; a < n && is_unit; ++a) {
          if (s.rng(a) == v && s.prod(u, a) != a) {
            is_unit = false;
          }
          if (s.src(a) == v && s.prod(a, u) != a) {
            is_unit = false;
          }
        }
        if (is_unit) {
          g.unit[v] = u;
        }
      }
      if (g.unit[v] == kNoArrow) {
        g.message = "vertex " + s.vertex_name(v) + " has no identity arrow";
        g.witness = {s.vertex_name(v)};
        return g;
      }
    }
    g.inverse.assign(n, kNoArrow);
    for (ArrowId a = 0; a < n; ++a) {
      for (ArrowId b = 0; b < n; ++b) {
        if (s.src(b) == s.rng(a) && s.rng(b) == s.src(a) && s.prod(a, b) == g.unit[s.rng(a)]
            && s.prod(b, a) == g.unit[s.src(a)]) {
          g.inverse[a] = b;
          break;
        }
      }
      if (g.inverse[a] == kNoArrow) {
        g.message = "arrow " + s.arrow_name(a) + " has no two-sided inverse";
        g.witness = {s.arrow_name(a)};
        return g;
      }
    }
    g.ok = true;
    return g;
  }

  std::optional<std::vector<ArrowId>> find_isomorphism(Semigroupoid const& a,
                                                       Semigroupoid const& b) {
    std::size_t const n = a.num_arrows();
    if (n != b.num_arrows() || a.num_vertices() != b.num_vertices()
        || a.composable_pairs().size() != b.composable_pairs().size()) {
      return std::nullopt;
    }
    std::vector<ArrowId>  f(n, kNoArrow);
    std::vector<bool>     used(n, false);
    std::vector<VertexId> vf(a.num_vertices(), kNone), vb(b.num_vertices(), kNone);

    auto bind_vertex = [&](VertexId x, VertexId y, std::vector<VertexId>& undo) {
      if (vf[x] == kNone && vb[y] == kNone) {
        vf[x] = y;
        vb[y] = x;
        undo.push_back(x);
        return true;
      }
      return vf[x] == y;
    };
    auto consistent = [&](ArrowId k) {
      for (ArrowId x = 0; x <= k; ++x) {
        for (ArrowId y = 0; y <= k; ++y) {
          if (x != k && y != k) {
            continue;
          }
          ArrowId const xy = a.prod(x, y);
          if (xy == kNoArrow) {
            if (b.prod(f[x], f[y]) != kNoArrow) {
              return false;
            }
          } else if (xy <= k && b.prod(f[x], f[y]) != f[xy]) {
            return false;
          }
        }
      }
      // products landing on k from earlier pairs
      for (ArrowId x = 0; x < k; ++x) {
        for (ArrowId y = 0; y < k; ++y) {
          if (a.prod(x, y) == k && b.prod(f[x], f[y]) != f[k]) {
            return false;
          }
        }
      }
      return true;
    };

    auto search = [&](auto&& self, ArrowId k) -> bool {
      if (k == n) {
        return true;
      }
      for (ArrowId y = 0; y < n; ++y) {
        if (used[y]) {
          continue;
        }
        std::vector<VertexId> undo;
        if (bind_vertex(a.src(k), b.src(y), undo) && bind_vertex(a.rng(k), b.rng(y), undo)) {
          f[k]    = y;
          used[y] = true;
          if (consistent(k) && self(self, k + 1)) {
            return true;
          }
          used[y] = false;
          f[k]    = kNoArrow;
        }
        for (VertexId x : undo) {
          vb[vf[x]] = kNone;
          vf[x]     = kNone;
        }
      }
      return false;
    };
    if (!search(search, 0)) {
      return std::nullopt;
    }
    return f;
  }

}  // namespace sectional
