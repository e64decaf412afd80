#include "sectional/actions.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace sectional {

  namespace {
    std::string pair_name(std::string const& a, std::string const& b) {
      return "(" + a + "," + b + ")";
    }
  }  // namespace

  Checked<LandPreaction> LandPreaction::validate(InverseSemigroupoidRef actor,
                                                 SemigroupoidRef space, ActionGraphs graphs,
                                                 std::string id) {
    InverseSemigroupoid const& S  = *actor;
    Semigroupoid const&        sb = S.base();
    Semigroupoid const&        L  = *space;
    std::size_t const          ns = sb.num_arrows();
    std::size_t const          nl = L.num_arrows();
    auto sn = [&](ArrowId s) { return sb.arrow_name(s); };
    auto ln = [&](ArrowId a) { return L.arrow_name(a); };

    if (graphs.size() != ns) {
      return structural_fail("structure", "action maps do not cover every actor arrow");
    }
    LandPreaction th;
    th.id_    = std::move(id);
    th.actor_ = actor;
    th.space_ = space;
    th.table_.assign(ns * nl, kNoArrow);
    th.dom_.resize(ns);
    for (ArrowId s = 0; s < ns; ++s) {
      std::vector<bool> hit(nl, false);
      for (auto [a, b] : graphs[s]) {
        if (a >= nl || b >= nl) {
          return structural_fail("structure", "θ_" + sn(s) + " refers to an unknown arrow",
                                 {sn(s)});
        }
        if (th.table_[s * nl + a] != kNoArrow) {
          return structural_fail("structure", "θ_" + sn(s) + " lists " + ln(a) + " twice",
                                 {sn(s), ln(a)});
        }
        if (hit[b]) {
          return fail("bijection", "θ_" + sn(s) + " is not injective at " + ln(b),
                      {sn(s), ln(b)});
        }
        hit[b]                  = true;
        th.table_[s * nl + a] = b;
        th.dom_[s].push_back(a);
      }
      std::sort(th.dom_[s].begin(), th.dom_[s].end());
    }

    // (iii) θ_{s*} = θ_s^-1
    for (ArrowId s = 0; s < ns; ++s) {
      ArrowId const ss = S.inv(s);
      for (ArrowId a = 0; a < nl; ++a) {
        ArrowId const b = th.apply(s, a);
        if (b != kNoArrow && th.apply(ss, b) != a) {
          return fail("inverse-compatibility",
                      "θ_" + sn(ss) + "(θ_" + sn(s) + "(" + ln(a) + ")) ≠ " + ln(a),
                      {sn(s), ln(a)});
        }
      }
      for (ArrowId b = 0; b < nl; ++b) {
        ArrowId const a = th.apply(ss, b);
        if (a != kNoArrow && th.apply(s, a) != b) {
          return fail("inverse-compatibility",
                      "θ_" + sn(s) + "(θ_" + sn(ss) + "(" + ln(b) + ")) ≠ " + ln(b),
                      {sn(s), ln(b)});
        }
      }
    }

    // (i) I(θ,v) is an ideal of Λ
    std::vector<std::vector<bool>> big(sb.num_vertices(), std::vector<bool>(nl, false));
    for (ArrowId s = 0; s < ns; ++s) {
      for (ArrowId a : th.dom_[s]) {
        big[sb.src(s)][a] = true;
      }
    }
    for (VertexId v = 0; v < sb.num_vertices(); ++v) {
      for (ArrowId a = 0; a < nl; ++a) {
        if (!big[v][a]) {
          continue;
        }
        for (ArrowId b = 0; b < nl; ++b) {
          bool const left  = L.composable(b, a) && !big[v][L.prod(b, a)];
          bool const right = L.composable(a, b) && !big[v][L.prod(a, b)];
          if (left || right) {
            return fail("ideal",
                        "I(θ," + sb.vertex_name(v) + ") is not an ideal: " + ln(a) + " ∈ I but "
                            + (left ? ln(b) + "·" + ln(a) : ln(a) + "·" + ln(b)) + " ∉ I",
                        {sb.vertex_name(v), ln(a), ln(b)});
          }
        }
      }
    }

    // (ii) dom and ran are ideals of the I's; θ_s is an isomorphism
    for (ArrowId s = 0; s < ns; ++s) {
      auto check_ideal = [&](auto&& member, VertexId v, char const* what)
          -> std::optional<ValidationReport> {
        for (ArrowId a = 0; a < nl; ++a) {
          if (!member(a)) {
            continue;
          }
          for (ArrowId b = 0; b < nl; ++b) {
            if (!big[v][b]) {
              continue;
            }
            if ((L.composable(a, b) && !member(L.prod(a, b)))
                || (L.composable(b, a) && !member(L.prod(b, a)))) {
              return fail("ideal",
                          std::string(what) + "(θ_" + sn(s) + ") is not an ideal of I(θ,"
                              + sb.vertex_name(v) + ")",
                          {sn(s), ln(a), ln(b)});
            }
          }
        }
        return std::nullopt;
      };
      if (auto r = check_ideal([&](ArrowId a) { return th.in_dom(s, a); }, sb.src(s), "dom")) {
        return *r;
      }
      ArrowId const ss = S.inv(s);
      if (auto r = check_ideal([&](ArrowId a) { return th.in_dom(ss, a); }, sb.rng(s), "ran")) {
        return *r;
      }
      for (ArrowId a : th.dom_[s]) {
        for (ArrowId b : th.dom_[s]) {
          ArrowId const ta = th.apply(s, a), tb = th.apply(s, b);
          if (L.composable(a, b) != L.composable(ta, tb)) {
            return fail("isomorphism",
                        "θ_" + sn(s) + " does not preserve composability of "
                            + pair_name(ln(a), ln(b)),
                        {sn(s), ln(a), ln(b)});
          }
          if (L.composable(a, b) && th.apply(s, L.prod(a, b)) != L.prod(ta, tb)) {
            return fail("isomorphism",
                        "θ_" + sn(s) + "(" + ln(a) + "·" + ln(b) + ") ≠ θ_" + sn(s) + "(" + ln(a)
                            + ")·θ_" + sn(s) + "(" + ln(b) + ")",
                        {sn(s), ln(a), ln(b)});
          }
        }
      }
    }

    // (iv) θ_st extends θ_s θ_t
    for (auto [s, t] : sb.composable_pairs()) {
      ArrowId const st = sb.prod(s, t);
      for (ArrowId x : th.dom_[t]) {
        ArrowId const tx = th.apply(t, x);
        if (!th.in_dom(s, tx)) {
          continue;
        }
        if (th.apply(st, x) != th.apply(s, tx)) {
          return fail("extension",
                      "θ_" + sn(s) + "(θ_" + sn(t) + "(" + ln(x) + ")) ≠ θ_" + sn(st) + "(" + ln(x)
                          + ")",
                      {sn(s), sn(t), ln(x)});
        }
      }
    }

    th.classify();
    return th;
  }

  void LandPreaction::classify() {
    InverseSemigroupoid const& S  = *actor_;
    Semigroupoid const&        sb = S.base();
    Semigroupoid const&        L  = *space_;
    std::size_t const          ns = sb.num_arrows();
    std::size_t const          nl = L.num_arrows();

    partial_ = true;
    for (ArrowId s = 0; s < ns && partial_; ++s) {
      for (ArrowId t = 0; t < ns && partial_; ++t) {
        if (!S.leq(s, t)) {
          continue;
        }
        for (ArrowId a : dom_[s]) {
          if (!in_dom(t, a)) {
            partial_ = false;
            break;
          }
        }
      }
    }

    global_ = true;
    for (auto [s, t] : sb.composable_pairs()) {
      ArrowId const st = sb.prod(s, t);
      for (ArrowId x : dom_[st]) {
        ArrowId const tx = apply(t, x);
        if (tx == kNoArrow || !in_dom(s, tx)) {
          global_ = false;
          break;
        }
      }
      if (!global_) {
        break;
      }
    }

    // θ_{t*}(a θ_t(b)) c = θ_{t*}(a θ_t(bc)) where both sides are defined
    auto mul = [&](ArrowId x, ArrowId y) {
      return (x == kNoArrow || y == kNoArrow || !L.composable(x, y)) ? kNoArrow : L.prod(x, y);
    };
    auto act = [&](ArrowId s, ArrowId x) { return x == kNoArrow ? kNoArrow : apply(s, x); };
    assoc_witness_.reset();
    for (ArrowId s = 0; s < ns; ++s) {
      for (ArrowId t = 0; t < ns; ++t) {
        if (!sb.composable(s, t)) {
          continue;
        }
        ArrowId const ts = S.inv(t);
        for (ArrowId u = 0; u < ns; ++u) {
          if (!sb.composable(t, u)) {
            continue;
          }
          std::vector<ArrowId> ran_u = ran(u);
          for (ArrowId a : dom_[s]) {
            for (ArrowId b : dom_[t]) {
              ArrowId const left_core = act(ts, mul(a, apply(t, b)));
              for (ArrowId c : ran_u) {
                ArrowId const lhs = mul(left_core, c);
                ArrowId const rhs = act(ts, mul(a, act(t, mul(b, c))));
                if (lhs != kNoArrow && rhs != kNoArrow && lhs != rhs) {
                  assoc_witness_ = std::array<ArrowId, 6>{s, t, u, a, b, c};
                  return;
                }
              }
            }
          }
        }
      }
    }
    (void)nl;
  }

  LandPreaction LandPreaction::trivial(InverseSemigroupoidRef actor, SemigroupoidRef space) {
    ActionGraphs g(actor->base().num_arrows());
    for (auto& m : g) {
      for (ArrowId a = 0; a < space->num_arrows(); ++a) {
        m.emplace_back(a, a);
      }
    }
    return validate(std::move(actor), std::move(space), std::move(g), "trivial").value();
  }

  std::vector<ArrowId> LandPreaction::ran(ArrowId s) const {
    std::vector<ArrowId> out;
    for (ArrowId a : dom_[s]) {
      out.push_back(apply(s, a));
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  ValidationReport LandPreaction::associativity_report() const {
    if (!assoc_witness_) {
      throw std::logic_error("associativity_report() on an associative preaction");
    }
    auto const& w  = *assoc_witness_;
    auto const& sb = actor_->base();
    auto const& L  = *space_;
    return fail("associativity",
                "θ_{t*}(aθ_t(b))c ≠ θ_{t*}(aθ_t(bc)) for s,t,u = " + sb.arrow_name(w[0]) + ","
                    + sb.arrow_name(w[1]) + "," + sb.arrow_name(w[2]),
                {sb.arrow_name(w[0]), sb.arrow_name(w[1]), sb.arrow_name(w[2]),
                 L.arrow_name(w[3]), L.arrow_name(w[4]), L.arrow_name(w[5])});
  }

  nlohmann::json LandPreaction::to_json() const {
    nlohmann::json j;
    j["id"]    = id_;
    j["actor"] = actor_->base().id();
    j["space"] = space_->id();
    j["maps"]  = nlohmann::json::object();
    for (ArrowId s = 0; s < dom_.size(); ++s) {
      nlohmann::json dom = nlohmann::json::array(), img = nlohmann::json::array();
      for (ArrowId a : dom_[s]) {
        dom.push_back(space_->arrow_name(a));
        img.push_back(space_->arrow_name(apply(s, a)));
      }
      j["maps"][actor_->base().arrow_name(s)] = {{"dom", dom}, {"img", img}};
    }
    return j;
  }

  // ---------------------------------------------------------------------------

  Checked<SemidirectProduct> semidirect_product(LandPreaction const& theta) {
    if (!theta.is_associative()) {
      return theta.associativity_report().in_stage("semidirect");
    }
    InverseSemigroupoid const& S  = theta.actor();
    Semigroupoid const&        sb = S.base();
    Semigroupoid const&        L  = theta.space();
    std::size_t const          ns = sb.num_arrows();
    std::size_t const          nl = L.num_arrows();

    SemidirectProduct sp;
    sp.space_arrows = nl;
    sp.index.assign(ns * nl, kNoArrow);
    for (ArrowId s = 0; s < ns; ++s) {
      for (ArrowId a : theta.dom(s)) {
        sp.index[s * nl + a] = static_cast<ArrowId>(sp.components.size());
        sp.components.emplace_back(s, a);
      }
    }
    std::size_t const n = sp.components.size();

    // vertex (v, w) keyed by v * |Λ0| + w; only those that occur are kept
    std::size_t const                        nlv = L.num_vertices();
    std::map<std::size_t, VertexId>          vid;
    std::vector<std::size_t>                 src_key(n), rng_key(n);
    for (ArrowId k = 0; k < n; ++k) {
      auto [s, a] = sp.components[k];
      src_key[k]  = sb.src(s) * nlv + L.src(a);
      rng_key[k]  = sb.rng(s) * nlv + L.rng(theta.apply(s, a));
      vid.emplace(src_key[k], 0);
      vid.emplace(rng_key[k], 0);
    }
    std::vector<std::string> vertex_names;
    for (auto& [key, v] : vid) {
      v = static_cast<VertexId>(vertex_names.size());
      vertex_names.push_back(pair_name(sb.vertex_name(static_cast<VertexId>(key / nlv)),
                                       L.vertex_name(static_cast<VertexId>(key % nlv))));
    }

    SemigroupoidTables t;
    t.id           = sb.id() + "⋉" + L.id();
    t.vertex_names = std::move(vertex_names);
    t.prod.assign(n * n, kNoArrow);
    for (ArrowId k = 0; k < n; ++k) {
      auto [s, a] = sp.components[k];
      t.arrow_names.push_back(pair_name(sb.arrow_name(s), L.arrow_name(a)));
      t.src.push_back(vid.at(src_key[k]));
      t.rng.push_back(vid.at(rng_key[k]));
    }
    for (ArrowId p = 0; p < n; ++p) {
      auto [s, a] = sp.components[p];
      for (ArrowId q = 0; q < n; ++q) {
        auto [u, b] = sp.components[q];
        if (!sb.composable(s, u)) {
          continue;
        }
        ArrowId const ub = theta.apply(u, b);
        if (!L.composable(a, ub)) {
          continue;
        }
        ArrowId const c = theta.apply(S.inv(u), L.prod(a, ub));
        ArrowId const su = sb.prod(s, u);
        if (c == kNoArrow || !theta.in_dom(su, c)) {
          return fail("semidirect-domain",
                      "θ_{t*}(aθ_t(b)) is not in dom θ_st for " + t.arrow_names[p] + "·"
                          + t.arrow_names[q],
                      {t.arrow_names[p], t.arrow_names[q]});
        }
        t.prod[p * n + q] = sp.index[su * nl + c];
      }
    }
    auto checked = Semigroupoid::validate(std::move(t));
    if (!checked) {
      ValidationReport r = checked.report();
      return r.in_stage("semidirect");
    }
    sp.semigroupoid = share(std::move(checked).value());
    return sp;
  }

  // ---------------------------------------------------------------------------

  Checked<RigidCongruence> RigidCongruence::validate(SemigroupoidRef                   base,
                                                     std::vector<std::vector<ArrowId>> classes) {
    Semigroupoid const& b = *base;
    std::size_t const   n = b.num_arrows();
    std::vector<std::uint32_t> cls(n, kNone);
    for (auto& c : classes) {
      std::sort(c.begin(), c.end());
      if (c.empty()) {
        return structural_fail("partition", "empty congruence class");
      }
    }
    classes.erase(std::remove_if(classes.begin(), classes.end(),
                                 [](auto const& c) { return c.empty(); }),
                  classes.end());
    std::sort(classes.begin(), classes.end(),
              [](auto const& x, auto const& y) { return x.front() < y.front(); });
    for (std::uint32_t i = 0; i < classes.size(); ++i) {
      for (ArrowId a : classes[i]) {
        if (a >= n) {
          return structural_fail("partition", "congruence class contains an unknown arrow");
        }
        if (cls[a] != kNone) {
          return structural_fail("partition", b.arrow_name(a) + " lies in two classes",
                                 {b.arrow_name(a)});
        }
        cls[a] = i;
      }
    }
    for (ArrowId a = 0; a < n; ++a) {
      if (cls[a] == kNone) {
        return structural_fail("partition", b.arrow_name(a) + " lies in no class",
                               {b.arrow_name(a)});
      }
    }
    for (ArrowId x = 0; x < n; ++x) {
      for (ArrowId y : classes[cls[x]]) {
        if (b.src(x) != b.src(y) || b.rng(x) != b.rng(y)) {
          return fail("rigidity",
                      b.arrow_name(x) + " ∼ " + b.arrow_name(y) + " but their "
                          + (b.src(x) != b.src(y) ? "sources" : "ranges") + " differ",
                      {b.arrow_name(x), b.arrow_name(y)});
        }
      }
    }
    for (auto [x1, x2] : b.composable_pairs()) {
      ArrowId const x12 = b.prod(x1, x2);
      for (ArrowId y1 : classes[cls[x1]]) {
        for (ArrowId y2 : classes[cls[x2]]) {
          ArrowId const y12 = b.prod(y1, y2);
          if (y12 == kNoArrow || cls[y12] != cls[x12]) {
            return fail("compatibility",
                        b.arrow_name(x1) + "·" + b.arrow_name(x2) + " ≁ " + b.arrow_name(y1) + "·"
                            + b.arrow_name(y2),
                        {b.arrow_name(x1), b.arrow_name(x2), b.arrow_name(y1), b.arrow_name(y2)});
          }
        }
      }
    }
    RigidCongruence c;
    c.base_     = std::move(base);
    c.classes_  = std::move(classes);
    c.class_of_ = std::move(cls);
    return c;
  }

  RigidCongruence RigidCongruence::identity(SemigroupoidRef base) {
    std::vector<std::vector<ArrowId>> classes;
    for (ArrowId a = 0; a < base->num_arrows(); ++a) {
      classes.push_back({a});
    }
    return validate(std::move(base), std::move(classes)).value();
  }

  Quotient quotient_semigroupoid(RigidCongruence const& c) {
    Semigroupoid const& b = c.base();
    std::size_t const   k = c.classes().size();
    std::vector<std::string> names;
    std::vector<VertexId>    src, rng;
    for (std::uint32_t i = 0; i < k; ++i) {
      ArrowId const r = c.representative(i);
      names.push_back(b.arrow_name(r));
      src.push_back(b.src(r));
      rng.push_back(b.rng(r));
    }
    auto t = make_tables(b.id() + "/∼", b.tables().vertex_names, std::move(names), std::move(src),
                         std::move(rng), [&](ArrowId x, ArrowId y) {
                           return static_cast<ArrowId>(
                               c.class_of(b.prod(c.representative(x), c.representative(y))));
                         });
    for (auto [x, y] : b.composable_pairs()) {
      if (t.prod[c.class_of(x) * k + c.class_of(y)] != c.class_of(b.prod(x, y))) {
        throw InternalError("quotient product is not well defined at (" + b.arrow_name(x) + ","
                            + b.arrow_name(y) + ")");
      }
    }
    auto q = Semigroupoid::validate(std::move(t));
    if (!q) {
      throw InternalError("quotient of a rigid congruence is not a semigroupoid: "
                          + q.report().to_string());
    }
    SemigroupoidRef      qs = share(std::move(q).value());
    std::vector<ArrowId> map(b.num_arrows());
    for (ArrowId a = 0; a < map.size(); ++a) {
      map[a] = c.class_of(a);
    }
    auto p = Homomorphism::validate(c.base_ref(), qs, std::move(map), "p");
    if (!p || !p->is_rigid()) {
      throw InternalError("quotient projection is not a rigid homomorphism");
    }
    return Quotient{qs, std::move(p).value()};
  }

  Checked<GermQuotient> germ_quotient(LandPreaction const& theta) {
    GroupoidCheck const space_check = is_groupoid(theta.space());
    if (!space_check.ok) {
      return fail("groupoid", "the acted-on space is not a groupoid: " + space_check.message,
                  space_check.witness)
          .in_stage("germ");
    }
    auto spc = semidirect_product(theta);
    if (!spc) {
      ValidationReport r = spc.report();
      return r.in_stage("germ");
    }
    SemidirectProduct   sp = std::move(spc).value();
    Semigroupoid const& P  = *sp.semigroupoid;
    InverseSemigroupoid const& S = theta.actor();
    std::size_t const   n  = P.num_arrows();
    std::size_t const   ns = S.base().num_arrows();

    auto related = [&](ArrowId p, ArrowId q) {
      auto [s1, g1] = sp.components[p];
      auto [s2, g2] = sp.components[q];
      if (g1 != g2) {
        return false;
      }
      for (ArrowId u = 0; u < ns; ++u) {
        if (S.leq(u, s1) && S.leq(u, s2) && theta.in_dom(u, g1)) {
          return true;
        }
      }
      return false;
    };
    std::vector<bool> rel(n * n);
    for (ArrowId p = 0; p < n; ++p) {
      for (ArrowId q = 0; q < n; ++q) {
        rel[p * n + q] = related(p, q);
      }
    }
    for (ArrowId p = 0; p < n; ++p) {
      for (ArrowId q = 0; q < n; ++q) {
        if (!rel[p * n + q]) {
          continue;
        }
        for (ArrowId r = 0; r < n; ++r) {
          if (rel[q * n + r] && !rel[p * n + r]) {
            return fail("germ-transitivity",
                        P.arrow_name(p) + " ∼ " + P.arrow_name(q) + " ∼ " + P.arrow_name(r)
                            + " but " + P.arrow_name(p) + " ≁ " + P.arrow_name(r),
                        {P.arrow_name(p), P.arrow_name(q), P.arrow_name(r)})
                .in_stage("germ");
          }
        }
      }
    }
    std::vector<std::vector<ArrowId>> classes;
    std::vector<bool>                 seen(n, false);
    for (ArrowId p = 0; p < n; ++p) {
      if (seen[p]) {
        continue;
      }
      classes.emplace_back();
      for (ArrowId q = p; q < n; ++q) {
        if (rel[p * n + q]) {
          seen[q] = true;
          classes.back().push_back(q);
        }
      }
    }
    auto cong = RigidCongruence::validate(sp.semigroupoid, std::move(classes));
    if (!cong) {
      ValidationReport r = cong.report();
      return r.in_stage("germ");
    }
    Quotient      q = quotient_semigroupoid(cong.value());
    GroupoidCheck g = is_groupoid(*q.semigroupoid);
    return GermQuotient{std::move(sp), std::move(cong).value(), std::move(q), std::move(g)};
  }

}  // namespace sectional
