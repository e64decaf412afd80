#include "sectional/theorems.hpp"

#include <algorithm>

namespace sectional {

  namespace {
    std::optional<Matrix> invert(Matrix const& m, Ring const& ring) {
      if (m.rows != m.cols) {
        return std::nullopt;
      }
      std::size_t const n = m.rows;
      Matrix const      id = Matrix::identity(ring, n);
      if (!ring.supports_linear_algebra()) {
        if (n == 1 && ring.is_unit(m.at(0, 0))) {
          Matrix r(1, 1);
          r.at(0, 0) = ring.inv(m.at(0, 0));
          return r;
        }
        throw CapabilityError("inverting a transport matrix needs linear algebra over "
                              + ring.describe());
      }
      Matrix inv(n, n);
      for (std::size_t j = 0; j < n; ++j) {
        auto x = solve_particular(m, id.column(j), ring);
        if (!x) {
          return std::nullopt;
        }
        for (std::size_t i = 0; i < n; ++i) {
          inv.at(i, j) = (*x)[i];
        }
      }
      if (m.multiply(ring, inv) != id || inv.multiply(ring, m) != id) {
        return std::nullopt;
      }
      return inv;
    }

    Vector unit_vector(Ring const& ring, std::size_t n, std::size_t i) {
      Vector v(n);
      v[i] = ring.one();
      return v;
    }

    SparseVector single(std::size_t i, Scalar c) {
      return {{static_cast<std::uint32_t>(i), std::move(c)}};
    }

    void sort_sparse(SparseVector& v) {
      std::sort(v.begin(), v.end(), [](auto const& p, auto const& q) { return p.first < q.first; });
    }

    std::string vector_text(AlgebraPresentation const& a, Vector const& v) {
      return a.format(v);
    }

    void add_certificate(TheoremReport& r, Certificate c) {
      for (auto const& f : c.failures) {
        r.failures.push_back(f);
      }
      r.certificates.push_back(std::move(c));
    }
  }  // namespace

  void TheoremReport::check(std::string const& name, bool ok, ValidationReport const& on_failure) {
    checks[name] = ok;
    if (!ok) {
      failures.push_back(on_failure);
    }
  }

  bool TheoremReport::passed() const {
    return failures.empty();
  }

  nlohmann::json TheoremReport::to_json() const {
    nlohmann::json j;
    j["theorem"]  = theorem;
    j["instance"] = instance;
    j["ranks"]    = ranks;
    j["checks"]   = checks;
    j["certificates"] = nlohmann::json::array();
    for (auto const& c : certificates) {
      j["certificates"].push_back(c.to_json());
    }
    j["passed"]   = passed();
    j["failures"] = nlohmann::json::array();
    for (auto const& f : failures) {
      j["failures"].push_back(f.to_json());
    }
    return j;
  }

  AlgebraPresentation ring_as_algebra(Ring const& ring) {
    StructureConstants sc;
    sc.n     = 1;
    sc.table = {single(0, ring.one())};
    return AlgebraPresentation::validate(ring, {"1"}, std::move(sc), ring.describe()).value();
  }

  Bundle pullback_bundle(Bundle const& b, SemigroupoidRef base, std::vector<ArrowId> const& over,
                         std::string id) {
    Semigroupoid const& X = *base;
    Semigroupoid const& G = b.base();
    BundleData          d;
    d.id   = std::move(id);
    d.mode = b.mode();
    d.fiber_labels.resize(X.num_arrows());
    for (ArrowId x = 0; x < X.num_arrows(); ++x) {
      d.ranks.push_back(b.rank(over[x]));
      for (std::size_t i = 0; i < b.rank(over[x]); ++i) {
        d.fiber_labels[x].push_back(b.fiber_label(over[x], i));
      }
    }
    for (auto [x, y] : X.composable_pairs()) {
      ArrowId const ox = over[x], oy = over[y];
      if (!G.composable(ox, oy) || G.prod(ox, oy) != over[X.prod(x, y)]) {
        throw InternalError("pullback along a map that is not a homomorphism");
      }
      if (b.mode() == BundleMode::ring_fiber) {
        d.twist.emplace(std::make_pair(x, y), b.mu(ox, oy, 0, 0)[0]);
        continue;
      }
      PairConstants c(b.rank(ox), std::vector<Vector>(b.rank(oy)));
      for (std::size_t i = 0; i < b.rank(ox); ++i) {
        for (std::size_t j = 0; j < b.rank(oy); ++j) {
          c[i][j] = b.mu(ox, oy, i, j);
        }
      }
      d.constants.emplace(std::make_pair(x, y), std::move(c));
    }
    auto out = Bundle::validate(b.ring(), std::move(base), std::move(d));
    if (!out) {
      throw InternalError("pullback bundle failed validation: " + out.report().to_string());
    }
    return std::move(out).value();
  }

  // ---------------------------------------------------------------------------

  AlgebraPresentation tensor_product_algebra(AlgebraPresentation const& a,
                                             AlgebraPresentation const& b, ExecPolicy policy) {
    Ring const& ring = a.ring();
    if (!(ring == b.ring())) {
      throw InputError("tensor product of algebras over different rings");
    }
    if (!ring.is_commutative()) {
      throw CapabilityError("the tensor product of algebras over " + ring.describe()
                            + " is only a bimodule: the ring is not commutative");
    }
    std::size_t const        nb = b.rank();
    std::vector<std::string> labels;
    for (std::size_t u = 0; u < a.rank(); ++u) {
      for (std::size_t v = 0; v < nb; ++v) {
        labels.push_back(a.label(u) + "⊗" + b.label(v));
      }
    }
    auto sc = kernels::tabulate(
        a.rank() * nb,
        [&](std::size_t x, std::size_t y) {
          SparseVector out;
          for (auto const& [p, c] : a.product(x / nb, y / nb)) {
            for (auto const& [q, e] : b.product(x % nb, y % nb)) {
              Scalar const s = ring.mul(c, e);
              if (s != 0) {
                out.emplace_back(static_cast<std::uint32_t>(p * nb + q), s);
              }
            }
          }
          return out;
        },
        policy);
    auto t = AlgebraPresentation::validate(ring, std::move(labels), std::move(sc),
                                           "(" + a.provenance() + ")⊗(" + b.provenance() + ")",
                                           std::nullopt, policy);
    if (!t) {
      throw InternalError("tensor product failed validation: " + t.report().to_string());
    }
    return std::move(t).value();
  }

  Bundle bundle_times(Bundle const& b, SemigroupoidRef e) {
    SemigroupoidRef      base = share(direct_product(b.base(), *e));
    std::vector<ArrowId> over(base->num_arrows());
    for (ArrowId x = 0; x < over.size(); ++x) {
      over[x] = static_cast<ArrowId>(x / e->num_arrows());
    }
    return pullback_bundle(b, base, over, b.id() + "×" + e->id());
  }

  TensorTheorem tensor_theorem(BundleRef b, SemigroupoidRef e, ExecPolicy policy) {
    TensorTheorem out;
    out.sectional            = share(sectional_algebra(*b, nullptr, policy));
    out.semigroupoid_algebra = share(semigroupoid_algebra(b->ring(), e));
    out.tensor    = share(tensor_product_algebra(*out.sectional, *out.semigroupoid_algebra, policy));
    Bundle const times = bundle_times(*b, e);
    out.target         = share(sectional_algebra(times, nullptr, policy));

    Ring const&       ring = b->ring();
    std::size_t const ne   = out.semigroupoid_algebra->rank();
    out.t.name    = "T";
    out.t.source  = out.tensor;
    out.t.target  = out.target;
    out.t.inverse = std::vector<SparseVector>(out.target->rank());
    // T(δ_γ x ⊗ δ_e) = δ_(γ,e) x
    for (std::size_t u = 0; u < out.sectional->rank(); ++u) {
      auto [g, i] = b->locate(u);
      for (std::size_t v = 0; v < ne; ++v) {
        std::size_t const w = times.offset(static_cast<ArrowId>(g * e->num_arrows() + v)) + i;
        out.t.images.push_back(single(w, ring.one()));
        (*out.t.inverse)[w] = single(u * ne + v, ring.one());
      }
    }
    CertifyOptions opt;
    opt.policy = policy;
    TheoremReport& r = out.report;
    r.theorem        = "tensor";
    r.ranks          = {{"sectional", out.sectional->rank()},
                        {"semigroupoid_algebra", ne},
                        {"tensor", out.tensor->rank()},
                        {"target", out.target->rank()}};
    Certificate c    = certify(out.t, opt);
    r.checks["multiplicative"] = c.multiplicative.value_or(false);
    r.checks["inverse"]        = c.inverse_composites.value_or(false);
    if (c.bijective_linear) {
      r.checks["bijective"] = *c.bijective_linear;
    }
    add_certificate(r, std::move(c));
    std::size_t const lhs = out.target->rank(), rhs = out.sectional->rank() * ne;
    r.check("rank_identity", lhs == rhs,
            fail("rank-identity", "rank A(π×E) = " + std::to_string(lhs) + " ≠ "
                                      + std::to_string(out.sectional->rank()) + "·"
                                      + std::to_string(ne)));
    return out;
  }

  // ---------------------------------------------------------------------------

  Checked<BundleAction> BundleAction::validate(LandPreactionRef theta, BundleRef bundle,
                                               std::vector<std::map<ArrowId, Matrix>> transports,
                                               std::string id) {
    LandPreaction const&       th   = *theta;
    Bundle const&              b    = *bundle;
    Semigroupoid const&        G    = b.base();
    InverseSemigroupoid const& S    = th.actor();
    Semigroupoid const&        Sb   = S.base();
    Ring const&                ring = b.ring();
    if (!(G == th.space())) {
      return structural_fail("structure", "the action's space is not the bundle's base");
    }
    if (!ring.is_commutative()) {
      throw CapabilityError("bundle actions need a commutative ring; " + ring.describe()
                            + " is not");
    }
    if (transports.size() != Sb.num_arrows()) {
      return structural_fail("structure", "transports do not cover every actor arrow");
    }
    for (ArrowId s = 0; s < Sb.num_arrows(); ++s) {
      auto const& dom = th.dom(s);
      if (transports[s].size() != dom.size()) {
        return structural_fail("transport-shape", "transports over " + Sb.arrow_name(s)
                                                      + " do not match dom θ_" + Sb.arrow_name(s),
                               {Sb.arrow_name(s)});
      }
      for (ArrowId g : dom) {
        auto it = transports[s].find(g);
        if (it == transports[s].end()) {
          return structural_fail("transport-shape",
                                 "no transport for " + G.arrow_name(g) + " under "
                                     + Sb.arrow_name(s),
                                 {Sb.arrow_name(s), G.arrow_name(g)});
        }
        if (it->second.rows != b.rank(th.apply(s, g)) || it->second.cols != b.rank(g)) {
          return structural_fail("transport-shape",
                                 "transport of " + G.arrow_name(g) + " under " + Sb.arrow_name(s)
                                     + " has the wrong shape",
                                 {Sb.arrow_name(s), G.arrow_name(g)});
        }
      }
    }
    if (!th.is_associative()) {
      return th.associativity_report();
    }

    BundleAction a;
    a.id_         = std::move(id);
    a.theta_      = std::move(theta);
    a.bundle_     = std::move(bundle);
    a.transports_ = std::move(transports);

    for (ArrowId s = 0; s < Sb.num_arrows(); ++s) {
      ArrowId const si = S.inv(s);
      for (ArrowId g : th.dom(s)) {
        ArrowId const h = th.apply(s, g);
        if (a.transport(si, h).multiply(ring, a.transport(s, g))
            != Matrix::identity(ring, b.rank(g))) {
          return fail("invertible",
                      "L_" + Sb.arrow_name(si) + " does not invert L_" + Sb.arrow_name(s)
                          + " on the fiber over " + G.arrow_name(g),
                      {Sb.arrow_name(s), G.arrow_name(g)});
        }
      }
    }

    for (ArrowId s = 0; s < Sb.num_arrows(); ++s) {
      for (auto [x, y] : G.composable_pairs()) {
        if (!th.in_dom(s, x) || !th.in_dom(s, y)) {
          continue;
        }
        ArrowId const xy = G.prod(x, y);
        ArrowId const tx = th.apply(s, x), ty = th.apply(s, y);
        for (std::size_t i = 0; i < b.rank(x); ++i) {
          for (std::size_t j = 0; j < b.rank(y); ++j) {
            Vector const lhs = a.transport(s, xy).apply(ring, b.mu(x, y, i, j));
            Vector const rhs =
                b.fiber_product(tx, ty, a.transport(s, x).apply(ring, unit_vector(ring, b.rank(x), i)),
                                a.transport(s, y).apply(ring, unit_vector(ring, b.rank(y), j)));
            if (lhs != rhs) {
              return fail("intertwining",
                          "L_" + Sb.arrow_name(s) + " does not intertwine the product over ("
                              + G.arrow_name(x) + ", " + G.arrow_name(y) + ") at e"
                              + std::to_string(i) + "·e" + std::to_string(j),
                          {Sb.arrow_name(s), G.arrow_name(x), G.arrow_name(y)});
            }
          }
        }
      }
    }

    for (auto [s, t] : Sb.composable_pairs()) {
      ArrowId const st = Sb.prod(s, t);
      for (ArrowId g : th.dom(t)) {
        ArrowId const h = th.apply(t, g);
        if (!th.in_dom(s, h)) {
          continue;
        }
        if (a.transport(st, g) != a.transport(s, h).multiply(ring, a.transport(t, g))) {
          return fail("extension",
                      "L_" + Sb.arrow_name(st) + " ≠ L_" + Sb.arrow_name(s) + " L_"
                          + Sb.arrow_name(t) + " on the fiber over " + G.arrow_name(g),
                      {Sb.arrow_name(s), Sb.arrow_name(t), G.arrow_name(g)});
        }
      }
    }
    return a;
  }

  Checked<BundleAction> BundleAction::identity(LandPreactionRef theta, BundleRef bundle) {
    std::size_t const                      m = theta->actor().base().num_arrows();
    std::vector<std::map<ArrowId, Matrix>> tr(m);
    for (ArrowId s = 0; s < m; ++s) {
      for (ArrowId g : theta->dom(s)) {
        std::size_t const k = bundle->rank(g);
        if (bundle->rank(theta->apply(s, g)) != k) {
          return structural_fail("transport-shape",
                                 "θ_" + theta->actor().base().arrow_name(s)
                                     + " moves a fiber to one of a different rank");
        }
        tr[s].emplace(g, Matrix::identity(bundle->ring(), k));
      }
    }
    std::string id = theta->id();
    return validate(std::move(theta), std::move(bundle), std::move(tr), std::move(id));
  }

  Checked<SemidirectBundle> bundle_semidirect(BundleAction const& theta) {
    LandPreaction const& th   = theta.theta();
    Bundle const&        b    = theta.bundle();
    Semigroupoid const&  G    = b.base();
    Ring const&          ring = b.ring();
    auto                 sd   = semidirect_product(th);
    if (!sd) {
      return ValidationReport(sd.report()).in_stage("semidirect");
    }
    SemidirectProduct const& base = sd.value();
    Semigroupoid const&      X    = *base.semigroupoid;
    InverseSemigroupoid const& S  = th.actor();

    BundleData d;
    d.id   = S.base().id() + "⋉" + b.id();
    d.mode = BundleMode::structure_constants;
    d.fiber_labels.resize(X.num_arrows());
    for (ArrowId x = 0; x < X.num_arrows(); ++x) {
      ArrowId const g = base.components[x].second;
      d.ranks.push_back(b.rank(g));
      for (std::size_t i = 0; i < b.rank(g); ++i) {
        d.fiber_labels[x].push_back(b.fiber_label(g, i));
      }
    }
    for (auto [x, y] : X.composable_pairs()) {
      auto [s, ga] = base.components[x];
      auto [t, gb] = base.components[y];
      ArrowId const tb  = th.apply(t, gb);
      ArrowId const atb = G.prod(ga, tb);
      ArrowId const out = base.components[X.prod(x, y)].second;
      if (atb == kNoArrow || th.apply(S.inv(t), atb) != out) {
        throw InternalError("semidirect product table disagrees with the action");
      }
      Matrix const& lt  = theta.transport(t, gb);
      Matrix const& lti = theta.transport(S.inv(t), atb);
      PairConstants c(b.rank(ga), std::vector<Vector>(b.rank(gb)));
      for (std::size_t i = 0; i < b.rank(ga); ++i) {
        for (std::size_t j = 0; j < b.rank(gb); ++j) {
          Vector const ly = lt.apply(ring, unit_vector(ring, b.rank(gb), j));
          c[i][j] = lti.apply(ring, b.fiber_product(ga, tb, unit_vector(ring, b.rank(ga), i), ly));
        }
      }
      d.constants.emplace(std::make_pair(x, y), std::move(c));
    }
    auto out = Bundle::validate(ring, base.semigroupoid, std::move(d));
    if (!out) {
      return ValidationReport(out.report()).in_stage("semidirect-bundle");
    }
    return SemidirectBundle{base, share(std::move(out).value())};
  }

  Checked<AlgebraAction> induced_theta(BundleAction const& theta, ExecPolicy policy) {
    LandPreaction const& th   = theta.theta();
    Bundle const&        b    = theta.bundle();
    Ring const&          ring = b.ring();
    AlgebraRef           a    = share(sectional_algebra(b, nullptr, policy));
    std::size_t const    n    = a->rank();
    std::size_t const    m    = th.actor().base().num_arrows();
    AlgebraActionData    data;
    data.domains.resize(m);
    data.images.resize(m);
    for (ArrowId s = 0; s < m; ++s) {
      for (ArrowId g : th.dom(s)) {
        ArrowId const h = th.apply(s, g);
        Matrix const& l = theta.transport(s, g);
        for (std::size_t i = 0; i < b.rank(g); ++i) {
          data.domains[s].push_back(b.offset(g) + i);
          Vector img(n);
          for (std::size_t r = 0; r < l.rows; ++r) {
            img[b.offset(h) + r] = l.at(r, i);
          }
          data.images[s].push_back(std::move(img));
        }
      }
    }
    (void)ring;
    auto out = AlgebraAction::validate(th.actor_ref(), std::move(a), std::move(data),
                                       "Θ(" + theta.id() + ")");
    if (!out) {
      return ValidationReport(out.report()).in_stage("induced");
    }
    return out;
  }

  Checked<CrossedTheorem> crossed_theorem(BundleAction const& theta, ExecPolicy policy) {
    auto sdb = bundle_semidirect(theta);
    if (!sdb) {
      return sdb.report();
    }
    auto big = induced_theta(theta, policy);
    if (!big) {
      return big.report();
    }
    TheoremReport r;
    r.theorem = "crossed";
    r.check("theta_associative", big->is_associative(),
            big->is_associative() ? ValidationReport{} : big->associativity_report());
    auto crossed = naive_crossed_product(big.value(), nullptr, policy);
    if (!crossed) {
      return crossed.report();
    }
    auto ls = lscript_iso(big.value(), policy);
    if (!ls) {
      return ls.report();
    }
    Bundle const&     b    = theta.bundle();
    Ring const&       ring = b.ring();
    SemidirectBundle  sd   = std::move(sdb).value();
    AlgebraRef        tgt  = share(sectional_algebra(*sd.bundle, nullptr, policy));
    CrossedAlgebra    cp   = std::move(crossed).value();

    LinearMapOnBasis psi;
    psi.name    = "Ψ";
    psi.source  = cp.algebra;
    psi.target  = tgt;
    psi.inverse = std::vector<SparseVector>(tgt->rank());
    // Ψ(δ_s δ_γ x) = δ_(s,γ) x
    for (std::size_t u = 0; u < cp.components.size(); ++u) {
      auto [s, k]        = cp.components[u];
      auto [g, i]        = b.locate(k);
      ArrowId const x    = sd.base.arrow_of(s, g);
      std::size_t const w = sd.bundle->offset(x) + i;
      psi.images.push_back(single(w, ring.one()));
      (*psi.inverse)[w] = single(u, ring.one());
    }
    CertifyOptions opt;
    opt.inverse_multiplicative = true;
    opt.policy                 = policy;
    Certificate c              = certify(psi, opt);
    r.checks["psi_multiplicative"] = c.multiplicative.value_or(false);
    r.checks["phi_psi_inverse"]    = c.inverse_composites.value_or(false);
    add_certificate(r, std::move(c));

    LscriptIso  l  = std::move(ls).value();
    Certificate c2 = certify(l.phi, opt);
    r.checks["lscript_multiplicative"] = c2.multiplicative.value_or(false);
    r.checks["lscript_inverse"]        = c2.inverse_composites.value_or(false);
    add_certificate(r, std::move(c2));
    r.ranks = {{"sectional_semidirect", tgt->rank()},
               {"crossed", cp.algebra->rank()},
               {"lscript", l.lscript.algebra->rank()},
               {"base_sectional", big->algebra().rank()}};
    return CrossedTheorem{std::move(sd),   tgt,          std::move(big).value(), std::move(cp),
                          std::move(psi),  std::move(l), std::move(r)};
  }

  // ---------------------------------------------------------------------------

  Checked<SmashProduct> smash_product(AlgebraPresentation const& a, ExecPolicy policy) {
    Grading const&      gr = a.grading();
    Semigroupoid const& G  = *gr.by;
    GroupoidCheck const gc = is_groupoid(G);
    if (!gc.ok) {
      return fail("groupoid", "the grading semigroupoid is not a groupoid: " + gc.message,
                  gc.witness);
    }
    std::size_t const  ng = G.num_arrows();
    SmashProduct       out;
    std::vector<std::uint32_t> index(a.rank() * ng, kNone);
    std::vector<std::string>   labels;
    Grading                    deg{gr.by, {}};
    for (std::size_t u = 0; u < a.rank(); ++u) {
      for (ArrowId h = 0; h < ng; ++h) {
        if (G.src(gr.degree[u]) == G.rng(h)) {
          index[u * ng + h] = static_cast<std::uint32_t>(out.components.size());
          out.components.emplace_back(u, h);
          labels.push_back(a.label(u) + "#" + G.arrow_name(h));
          deg.degree.push_back(gr.degree[u]);
        }
      }
    }
    bool leak = false;
    auto sc   = kernels::tabulate(
        out.components.size(),
        [&](std::size_t x, std::size_t y) {
          auto [u, g] = out.components[x];
          auto [v, h] = out.components[y];
          SparseVector r;
          if (G.src(g) != G.src(h) || gr.degree[v] != G.prod(g, gc.inverse[h])) {
            return r;
          }
          for (auto const& [w, c] : a.product(u, v)) {
            std::uint32_t const k = index[w * ng + h];
            if (k == kNone) {
              leak = true;
              continue;
            }
            r.emplace_back(k, c);
          }
          sort_sparse(r);
          return r;
        },
        policy);
    if (leak) {
      throw InternalError("smash product left its admissible basis");
    }
    auto alg = AlgebraPresentation::validate(a.ring(), std::move(labels), std::move(sc),
                                             a.provenance() + "#" + G.id(), std::move(deg), policy);
    if (!alg) {
      return ValidationReport(alg.report()).in_stage("smash");
    }
    out.algebra = share(std::move(alg).value());
    return out;
  }

  Checked<SkewProduct> skew_product(Homomorphism const& d) {
    Semigroupoid const& X  = d.source();
    Semigroupoid const& G  = d.target();
    GroupoidCheck const gc = is_groupoid(G);
    if (!gc.ok) {
      return fail("groupoid", "the grading semigroupoid is not a groupoid: " + gc.message,
                  gc.witness);
    }
    std::vector<std::pair<ArrowId, ArrowId>> comp;
    for (ArrowId x = 0; x < X.num_arrows(); ++x) {
      for (ArrowId g = 0; g < G.num_arrows(); ++g) {
        if (G.src(d(x)) == G.rng(g)) {
          comp.emplace_back(x, g);
        }
      }
    }
    // vertices (v, g) of Γ⁰ × G that occur
    std::vector<std::pair<VertexId, ArrowId>> ends;
    for (auto [x, g] : comp) {
      ends.emplace_back(X.src(x), g);
      ends.emplace_back(X.rng(x), G.prod(d(x), g));
    }
    std::sort(ends.begin(), ends.end());
    ends.erase(std::unique(ends.begin(), ends.end()), ends.end());
    auto vertex = [&](VertexId v, ArrowId g) {
      return static_cast<VertexId>(std::lower_bound(ends.begin(), ends.end(), std::make_pair(v, g))
                                   - ends.begin());
    };
    std::vector<std::string> vnames, anames;
    for (auto [v, g] : ends) {
      vnames.push_back("(" + X.vertex_name(v) + "," + G.arrow_name(g) + ")");
    }
    std::vector<VertexId> src, rng;
    for (auto [x, g] : comp) {
      anames.push_back("(" + X.arrow_name(x) + "," + G.arrow_name(g) + ")");
      src.push_back(vertex(X.src(x), g));
      rng.push_back(vertex(X.rng(x), G.prod(d(x), g)));
    }
    auto find = [&](ArrowId x, ArrowId g) {
      auto it = std::lower_bound(comp.begin(), comp.end(), std::make_pair(x, g));
      return it != comp.end() && *it == std::make_pair(x, g)
                 ? static_cast<ArrowId>(it - comp.begin())
                 : kNoArrow;
    };
    auto tables = make_tables(X.id() + "#" + G.id(), std::move(vnames), std::move(anames),
                              std::move(src), std::move(rng), [&](ArrowId p, ArrowId q) {
                                return find(X.prod(comp[p].first, comp[q].first), comp[q].second);
                              });
    auto s = Semigroupoid::validate(std::move(tables));
    if (!s) {
      return ValidationReport(s.report()).in_stage("skew");
    }
    SemigroupoidRef      sref = share(std::move(s).value());
    std::vector<ArrowId> map;
    for (auto [x, g] : comp) {
      map.push_back(d(x));
      (void)g;
    }
    auto h = Homomorphism::validate(sref, d.target_ref(), std::move(map), "d~");
    if (!h) {
      return ValidationReport(h.report()).in_stage("skew");
    }
    return SkewProduct{sref, std::move(comp), std::move(h).value()};
  }

  Checked<SmashTheorem> smash_theorem(BundleRef b, Homomorphism const& d, ExecPolicy policy) {
    if (!(d.source() == b->base())) {
      throw InputError("the grading is not defined on the bundle's base");
    }
    AlgebraRef a  = share(sectional_algebra(*b, &d, policy));
    auto       sm = smash_product(*a, policy);
    if (!sm) {
      return sm.report();
    }
    auto sk = skew_product(d);
    if (!sk) {
      return sk.report();
    }
    SkewProduct skew = std::move(sk).value();
    std::vector<ArrowId> over;
    for (auto [x, g] : skew.components) {
      over.push_back(x);
      (void)g;
    }
    Bundle const sb = pullback_bundle(*b, skew.semigroupoid, over, b->id() + "#" + d.target().id());
    AlgebraRef   tgt = share(sectional_algebra(sb, &skew.grading, policy));
    SmashProduct smash = std::move(sm).value();

    Ring const&       ring = b->ring();
    std::size_t const ng   = d.target().num_arrows();
    std::vector<ArrowId> arrow_of(b->base().num_arrows() * ng, kNoArrow);
    for (ArrowId k = 0; k < skew.components.size(); ++k) {
      arrow_of[skew.components[k].first * ng + skew.components[k].second] = k;
    }
    LinearMapOnBasis t;
    t.name    = "T";
    t.source  = smash.algebra;
    t.target  = tgt;
    t.inverse = std::vector<SparseVector>(tgt->rank());
    // T(δ_γ x #g) = δ_(γ,g) x
    for (std::size_t u = 0; u < smash.components.size(); ++u) {
      auto [v, g]         = smash.components[u];
      auto [x, i]         = b->locate(v);
      std::size_t const w = sb.offset(arrow_of[x * ng + g]) + i;
      t.images.push_back(single(w, ring.one()));
      (*t.inverse)[w] = single(u, ring.one());
    }
    CertifyOptions opt;
    opt.inverse_multiplicative = true;
    opt.degrees                = true;
    opt.policy                 = policy;
    TheoremReport r;
    r.theorem      = "smash";
    Certificate c  = certify(t, opt);
    r.checks["multiplicative"] = c.multiplicative.value_or(false);
    r.checks["inverse"]        = c.inverse_composites.value_or(false);
    r.checks["graded"]         = c.degrees.value_or(false);
    add_certificate(r, std::move(c));
    r.ranks = {{"sectional", a->rank()},
               {"smash", smash.algebra->rank()},
               {"skew_arrows", skew.semigroupoid->num_arrows()},
               {"target", tgt->rank()}};
    return SmashTheorem{a, std::move(smash), std::move(skew), tgt, std::move(t), std::move(r)};
  }

  // ---------------------------------------------------------------------------

  Checked<BundleCongruence> BundleCongruence::validate(
      BundleRef bundle, RigidCongruence base, std::map<std::pair<ArrowId, ArrowId>, Matrix> given,
      std::string id) {
    Bundle const&       b    = *bundle;
    Semigroupoid const& G    = b.base();
    Ring const&         ring = b.ring();
    if (!(base.base() == G)) {
      return structural_fail("structure", "the congruence is not on the bundle's base");
    }
    if (!ring.is_commutative()) {
      throw CapabilityError("bundle congruences need a commutative ring; " + ring.describe()
                            + " is not");
    }
    for (auto const& cls : base.classes()) {
      for (ArrowId g : cls) {
        if (b.rank(g) != b.rank(cls.front())) {
          return structural_fail("rank-mismatch",
                                 G.arrow_name(g) + " and " + G.arrow_name(cls.front())
                                     + " are related but their fibers have different ranks",
                                 {G.arrow_name(cls.front()), G.arrow_name(g)});
        }
      }
    }
    for (auto const& [key, m] : given) {
      auto [x, y] = key;
      if (x >= G.num_arrows() || y >= G.num_arrows() || x == y || !base.related(x, y)) {
        return structural_fail("structure", "transport given between unrelated arrows");
      }
      if (m.rows != b.rank(y) || m.cols != b.rank(x)) {
        return structural_fail("transport-shape",
                               "transport " + G.arrow_name(x) + "->" + G.arrow_name(y)
                                   + " has the wrong shape",
                               {G.arrow_name(x), G.arrow_name(y)});
      }
    }

    BundleCongruence c(std::move(base));
    c.id_     = std::move(id);
    c.bundle_ = std::move(bundle);
    c.to_rep_.resize(G.num_arrows());
    c.from_rep_.resize(G.num_arrows());
    for (ArrowId g = 0; g < G.num_arrows(); ++g) {
      ArrowId const r = c.base_.representative(c.base_.class_of(g));
      std::size_t const k = b.rank(g);
      if (g == r) {
        c.to_rep_[g] = c.from_rep_[g] = Matrix::identity(ring, k);
        continue;
      }
      if (auto it = given.find({g, r}); it != given.end()) {
        c.to_rep_[g] = it->second;
        auto inv     = invert(it->second, ring);
        if (!inv) {
          return fail("invertible", "transport " + G.arrow_name(g) + "->" + G.arrow_name(r)
                                        + " is not invertible",
                      {G.arrow_name(g), G.arrow_name(r)});
        }
        c.from_rep_[g] = *inv;
      } else if (auto jt = given.find({r, g}); jt != given.end()) {
        c.from_rep_[g] = jt->second;
        auto inv       = invert(jt->second, ring);
        if (!inv) {
          return fail("invertible", "transport " + G.arrow_name(r) + "->" + G.arrow_name(g)
                                        + " is not invertible",
                      {G.arrow_name(r), G.arrow_name(g)});
        }
        c.to_rep_[g] = *inv;
      } else {
        c.to_rep_[g] = c.from_rep_[g] = Matrix::identity(ring, k);
      }
    }
    for (auto const& [key, m] : given) {
      auto [x, y] = key;
      if (c.transport(x, y) != m) {
        return fail("cocycle",
                    "transport " + G.arrow_name(x) + "->" + G.arrow_name(y)
                        + " disagrees with the composite through the class representative",
                    {G.arrow_name(x), G.arrow_name(y)});
      }
    }
    for (auto [x, y] : G.composable_pairs()) {
      ArrowId const xy = G.prod(x, y);
      for (ArrowId x2 : c.base_.classes()[c.base_.class_of(x)]) {
        for (ArrowId y2 : c.base_.classes()[c.base_.class_of(y)]) {
          ArrowId const xy2 = G.prod(x2, y2);
          Matrix const  txy = c.transport(xy, xy2);
          Matrix const  tx  = c.transport(x, x2);
          Matrix const  ty  = c.transport(y, y2);
          for (std::size_t i = 0; i < b.rank(x); ++i) {
            for (std::size_t j = 0; j < b.rank(y); ++j) {
              Vector const lhs = txy.apply(ring, b.mu(x, y, i, j));
              Vector const rhs =
                  b.fiber_product(x2, y2, tx.apply(ring, unit_vector(ring, b.rank(x), i)),
                                  ty.apply(ring, unit_vector(ring, b.rank(y), j)));
              if (lhs != rhs) {
                return fail("intertwining",
                            "transports do not intertwine the product over (" + G.arrow_name(x)
                                + ", " + G.arrow_name(y) + ") and (" + G.arrow_name(x2) + ", "
                                + G.arrow_name(y2) + ")",
                            {G.arrow_name(x), G.arrow_name(y), G.arrow_name(x2),
                             G.arrow_name(y2)});
              }
            }
          }
        }
      }
    }
    return c;
  }

  BundleCongruence BundleCongruence::identity(BundleRef bundle) {
    RigidCongruence base = RigidCongruence::identity(bundle->base_ref());
    return validate(std::move(bundle), std::move(base), {}, "identity").value();
  }

  Matrix BundleCongruence::transport(ArrowId a, ArrowId b) const {
    if (!base_.related(a, b)) {
      throw std::logic_error("transport between unrelated arrows");
    }
    return from_rep_[b].multiply(bundle_->ring(), to_rep_[a]);
  }

  QuotientBundle quotient_bundle(BundleCongruence const& c) {
    Bundle const&          b    = c.bundle();
    Semigroupoid const&    G    = b.base();
    Ring const&            ring = b.ring();
    RigidCongruence const& cong = c.base();
    Quotient               q    = quotient_semigroupoid(cong);
    Semigroupoid const&    Q    = *q.semigroupoid;

    BundleData d;
    d.id   = b.id() + "/~";
    d.mode = BundleMode::structure_constants;
    d.fiber_labels.resize(Q.num_arrows());
    for (ArrowId k = 0; k < Q.num_arrows(); ++k) {
      ArrowId const r = cong.representative(k);
      d.ranks.push_back(b.rank(r));
      for (std::size_t i = 0; i < b.rank(r); ++i) {
        d.fiber_labels[k].push_back(b.fiber_label(r, i));
      }
    }
    for (auto [k1, k2] : Q.composable_pairs()) {
      ArrowId const r1 = cong.representative(k1), r2 = cong.representative(k2);
      ArrowId const p   = G.prod(r1, r2);
      ArrowId const r12 = cong.representative(cong.class_of(p));
      Matrix const  tp  = c.transport(p, r12);
      PairConstants pc(b.rank(r1), std::vector<Vector>(b.rank(r2)));
      for (std::size_t i = 0; i < b.rank(r1); ++i) {
        for (std::size_t j = 0; j < b.rank(r2); ++j) {
          pc[i][j] = tp.apply(ring, b.mu(r1, r2, i, j));
        }
      }
      // representative independence
      for (ArrowId g1 : cong.classes()[k1]) {
        for (ArrowId g2 : cong.classes()[k2]) {
          ArrowId const g12 = G.prod(g1, g2);
          Matrix const  t12 = c.transport(g12, r12);
          Matrix const  t1  = c.transport(r1, g1);
          Matrix const  t2  = c.transport(r2, g2);
          for (std::size_t i = 0; i < b.rank(r1); ++i) {
            for (std::size_t j = 0; j < b.rank(r2); ++j) {
              Vector const v =
                  t12.apply(ring, b.fiber_product(g1, g2, t1.apply(ring, unit_vector(ring, b.rank(r1), i)),
                                                  t2.apply(ring, unit_vector(ring, b.rank(r2), j))));
              if (v != pc[i][j]) {
                throw InternalError("quotient fiber product depends on the representatives "
                                    + G.arrow_name(g1) + ", " + G.arrow_name(g2));
              }
            }
          }
        }
      }
      d.constants.emplace(std::make_pair(k1, k2), std::move(pc));
    }
    auto out = Bundle::validate(ring, q.semigroupoid, std::move(d));
    if (!out) {
      throw InternalError("quotient bundle failed validation: " + out.report().to_string());
    }
    return QuotientBundle{std::move(q), share(std::move(out).value())};
  }

  QuotientTheorem quotient_map_and_kernel(BundleCongruence const& c, ExecPolicy policy) {
    Bundle const&          b    = c.bundle();
    Ring const&            ring = b.ring();
    RigidCongruence const& cong = c.base();
    if (!ring.supports_linear_algebra()) {
      throw CapabilityError("the quotient kernel needs linear algebra over " + ring.describe());
    }
    QuotientTheorem out;
    out.quotient = quotient_bundle(c);
    Bundle const& qb = *out.quotient.bundle;
    out.source       = share(sectional_algebra(b, nullptr, policy));
    out.target       = share(sectional_algebra(qb, nullptr, policy));
    std::size_t const n = out.source->rank();

    out.t.name   = "T";
    out.t.source = out.source;
    out.t.target = out.target;
    // T(δ_γ x) = δ_[γ] T_{γ->rep}(x)
    for (std::size_t u = 0; u < n; ++u) {
      auto [g, i]            = b.locate(u);
      std::uint32_t const k  = cong.class_of(g);
      Vector const        v  = c.transport(g, cong.representative(k)).apply(ring, unit_vector(ring, b.rank(g), i));
      SparseVector        img;
      for (std::size_t r = 0; r < v.size(); ++r) {
        if (v[r] != 0) {
          img.emplace_back(static_cast<std::uint32_t>(qb.offset(k) + r), v[r]);
        }
      }
      out.t.images.push_back(std::move(img));
    }

    // conjugate-section differences e_i at γ - T_{γ->γ'} e_i at γ'
    for (auto const& cls : cong.classes()) {
      for (ArrowId g : cls) {
        for (ArrowId h : cls) {
          if (g == h) {
            continue;
          }
          Matrix const m = c.transport(g, h);
          for (std::size_t i = 0; i < b.rank(g); ++i) {
            Vector v(n);
            v[b.offset(g) + i] = ring.one();
            for (std::size_t r = 0; r < m.rows; ++r) {
              v[b.offset(h) + r] = ring.sub(v[b.offset(h) + r], m.at(r, i));
            }
            out.generators.push_back(std::move(v));
          }
        }
      }
    }

    TheoremReport& r = out.report;
    r.theorem        = "quotient";
    CertifyOptions opt;
    opt.linear_route = false;
    opt.policy       = policy;
    Certificate cert = certify(out.t, opt);
    r.checks["multiplicative"] = cert.multiplicative.value_or(false);
    add_certificate(r, std::move(cert));

    Matrix const m = out.t.matrix();
    r.check("surjective", is_surjective(m, ring), fail("surjective", "T is not surjective"));
    out.kernel = solve_linear(m, ring).kernel;

    Submodule kernel(ring, n), span(ring, n);
    for (auto const& v : out.kernel) {
      kernel.insert(v);
    }
    bool in_kernel = true;
    std::optional<Vector> stray;
    for (auto const& v : out.generators) {
      span.insert(v);
      if (in_kernel && !is_zero_vector(out.t.apply(v))) {
        in_kernel = false;
        stray     = v;
      }
    }
    r.check("generators_in_kernel", in_kernel,
            fail("kernel", "a conjugate-section difference is not killed by T",
                 {stray ? vector_text(*out.source, *stray) : ""}));
    std::optional<Vector> missing;
    for (auto const& v : kernel.basis()) {
      if (!span.contains(v)) {
        missing = v;
        break;
      }
    }
    bool const equal = !missing && kernel.contains(span);
    r.check("span_equals_kernel", equal,
            fail("kernel",
                 "the conjugate-section differences do not span ker T; this would be a gap in "
                 "the kernel theorem's hypotheses",
                 {missing ? vector_text(*out.source, *missing) : ""}));
    r.ranks = {{"source", n},
               {"target", out.target->rank()},
               {"kernel", kernel.rank()},
               {"generators", out.generators.size()},
               {"generator_span", span.rank()}};
    return out;
  }

  // ---------------------------------------------------------------------------

  Checked<GermCorollary> germ_corollary(LandPreactionRef theta, AlgebraRef a, ExecPolicy policy) {
    Ring const& ring = a->ring();
    if (!ring.supports_linear_algebra()) {
      throw CapabilityError("the germ corollary needs linear algebra over " + ring.describe());
    }
    auto gq = germ_quotient(*theta);
    if (!gq) {
      return ValidationReport(gq.report()).in_stage("germ");
    }
    BundleRef bundle = share(product_bundle(*a, theta->space_ref()));
    auto      act    = BundleAction::identity(theta, bundle);
    if (!act) {
      return ValidationReport(act.report()).in_stage("germ/action");
    }
    auto big = induced_theta(act.value(), policy);
    if (!big) {
      return ValidationReport(big.report()).in_stage("germ");
    }
    auto crossed = naive_crossed_product(big.value(), nullptr, policy);
    if (!crossed) {
      return ValidationReport(crossed.report()).in_stage("germ");
    }
    GermQuotient   germ = std::move(gq).value();
    AlgebraAction  th   = std::move(big).value();
    CrossedAlgebra cp   = std::move(crossed).value();
    InverseSemigroupoid const& S = theta->actor();
    std::size_t const          m = S.base().num_arrows();
    std::size_t const          n = cp.algebra->rank();

    std::vector<Vector> generators;
    for (ArrowId s = 0; s < m; ++s) {
      for (ArrowId t = 0; t < m; ++t) {
        if (s == t || !S.leq(s, t)) {
          continue;
        }
        for (std::size_t d : th.dom(s)) {
          if (!th.in_dom(t, d)) {
            continue;
          }
          Vector v(n);
          v[cp.basis_of(s, d)] = ring.one();
          v[cp.basis_of(t, d)] = ring.neg(ring.one());
          generators.push_back(std::move(v));
        }
      }
    }
    Submodule const ideal = ideal_closure(generators, *cp.algebra);

    AlgebraRef target = share(semigroupoid_algebra(*a, germ.quotient.semigroupoid));
    std::size_t const rank_a = a->rank();
    LinearMapOnBasis  map;
    map.name   = "T";
    map.source = cp.algebra;
    map.target = target;
    // δ_s δ_g x ↦ δ_[(s,g)] x
    for (auto [s, k] : cp.components) {
      auto [g, i]             = bundle->locate(k);
      ArrowId const       x   = germ.semidirect.arrow_of(s, g);
      std::uint32_t const cls = germ.congruence.class_of(x);
      map.images.push_back(single(cls * rank_a + i, ring.one()));
    }

    TheoremReport r;
    r.theorem = "germ";
    r.check("germ_groupoid", germ.groupoid.ok,
            fail("groupoid", "the groupoid of germs is not a groupoid: " + germ.groupoid.message,
                 germ.groupoid.witness));
    CertifyOptions opt;
    opt.linear_route = false;
    opt.policy       = policy;
    Certificate cert = certify(map, opt);
    r.checks["multiplicative"] = cert.multiplicative.value_or(false);
    add_certificate(r, std::move(cert));

    Matrix const mat = map.matrix();
    r.check("surjective", is_surjective(mat, ring), fail("surjective", "T is not surjective"));
    Submodule kernel(ring, n);
    for (auto const& v : solve_linear(mat, ring).kernel) {
      kernel.insert(v);
    }
    std::vector<Vector> ideal_basis = ideal.basis();
    bool                well_defined = kernel.contains(ideal);
    r.check("ideal_in_kernel", well_defined,
            fail("kernel", "the ideal is not contained in ker T"));
    std::optional<Vector> missing;
    for (auto const& v : kernel.basis()) {
      if (!ideal.contains(v)) {
        missing = v;
        break;
      }
    }
    r.check("kernel_equals_ideal", !missing,
            fail("kernel", "ker T is larger than the ideal",
                 {missing ? cp.algebra->format(*missing) : ""}));
    std::size_t const quotient_rank = n - ideal.rank();
    r.check("rank_identity", quotient_rank == target->rank(),
            fail("rank-identity", "rank S⋆A𝒢 - rank ideal = " + std::to_string(quotient_rank)
                                      + " ≠ " + std::to_string(target->rank())));
    r.ranks = {{"group_algebra", th.algebra().rank()},
               {"crossed", n},
               {"generators", generators.size()},
               {"ideal", ideal.rank()},
               {"quotient", quotient_rank},
               {"germ_algebra", target->rank()}};
    AlgebraRef group_algebra = th.algebra_ref();
    return GermCorollary{std::move(germ),       group_algebra, std::move(th),
                         std::move(cp),         std::move(generators), std::move(ideal_basis),
                         target,                std::move(map), std::move(r)};
  }

}  // namespace sectional
