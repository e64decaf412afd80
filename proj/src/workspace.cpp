#include "sectional/workspace.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "sectional/catalog.hpp"

namespace sectional {

  namespace {
    using nlohmann::json;

    std::vector<std::string> const kStanzas = {
        "semigroupoids", "inverse_semigroupoids", "homomorphisms", "actions",
        "algebras",      "bundles",               "bundle_actions", "congruences"};

    std::set<std::string> const kVerify = {"tensor", "crossed", "smash", "quotient", "germ"};
    std::set<std::string> const kBuild  = {"sectional", "semidirect", "germ", "skew", "quotient",
                                           "semidirect_bundle", "smash", "crossed"};

    // task parameter -> stanzas it may name
    std::map<std::string, std::vector<std::string>> const kParamKinds = {
        {"bundle", {"bundles"}},
        {"semigroupoid", {"semigroupoids"}},
        {"grading", {"homomorphisms"}},
        {"bundle_action", {"bundle_actions"}},
        {"congruence", {"congruences"}},
        {"action", {"actions"}},
        {"algebra", {"algebras"}},
    };

    std::map<std::string, std::vector<std::string>> const kRequired = {
        {"verify:tensor", {"bundle", "semigroupoid"}},
        {"verify:crossed", {"bundle_action"}},
        {"verify:smash", {"bundle", "grading"}},
        {"verify:quotient", {"congruence"}},
        {"verify:germ", {"action"}},
        {"build:sectional", {"bundle"}},
        {"build:semidirect", {"action"}},
        {"build:germ", {"action"}},
        {"build:skew", {"grading"}},
        {"build:quotient", {"congruence"}},
        {"build:semidirect_bundle", {"bundle_action"}},
        {"build:smash", {"bundle", "grading"}},
        {"build:crossed", {"bundle_action"}},
    };

    json const kEmpty = json::object();

    json const& field(json const& j, char const* key) {
      return j.contains(key) ? j[key] : kEmpty;
    }

    //! Splits "a<sep>b" at the first occurrence of sep whose halves are both
    //! arrow names; arrow names may themselves contain sep.
    template <typename IsArrow>
    std::optional<std::pair<std::string, std::string>> split_pair(std::string const& k,
                                                                  std::string const& sep,
                                                                  IsArrow&&          is_arrow) {
      for (auto p = k.find(sep); p != std::string::npos; p = k.find(sep, p + 1)) {
        std::string a = k.substr(0, p), b = k.substr(p + sep.size());
        if (is_arrow(a) && is_arrow(b)) {
          return std::make_pair(std::move(a), std::move(b));
        }
      }
      return std::nullopt;
    }

    std::string position(std::string_view text, std::size_t byte) {
      std::size_t line = 1, col = 1;
      for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
          ++line;
          col = 1;
        } else {
          ++col;
        }
      }
      return "line " + std::to_string(line) + ", column " + std::to_string(col);
    }

    std::string str(json const& j, char const* key, std::string const& where) {
      if (!j.contains(key) || !j[key].is_string()) {
        throw ParseError(where + ": missing string field '" + key + "'");
      }
      return j[key].get<std::string>();
    }

    json expand_catalog(json const& d) {
      std::string const name = d["catalog"].get<std::string>();
      auto              n    = [&] { return d.value("n", std::size_t{2}); };
      Semigroupoid      s    = [&] {
        if (name == "trivial_monoid") {
          return catalog::trivial_monoid();
        }
        if (name == "pair_groupoid") {
          return catalog::pair_groupoid(n());
        }
        if (name == "cyclic_group") {
          return catalog::cyclic_group(n());
        }
        if (name == "unit_groupoid") {
          return catalog::unit_groupoid(d.at("vertices").get<std::vector<std::string>>());
        }
        if (name == "semilattice") {
          return catalog::semilattice();
        }
        if (name == "klein_four") {
          return catalog::klein_four();
        }
        throw ParseError("unknown catalog structure '" + name + "'");
      }();
      json out  = s.to_json();
      out["id"] = d["id"];
      return out;
    }

    struct Names {
      std::set<std::string> vertices, arrows;
    };

    class Resolver {
     public:
      explicit Resolver(WorkspaceFile& f) : f_(f) {}

      void run() {
        for (auto& d : f_.semigroupoids) {
          semigroupoid(d);
        }
        for (auto const& d : f_.inverse_semigroupoids) {
          std::string const base = ref(d.body, "base", "semigroupoids", d.id);
          if (d.body.contains("inv")) {
            for (auto const& [k, v] : d.body["inv"].items()) {
              arrow(base, k, d.id);
              arrow(base, v.get<std::string>(), d.id);
            }
          }
        }
        for (auto const& d : f_.homomorphisms) {
          std::string const src = ref(d.body, "source", "semigroupoids", d.id);
          std::string const tgt = ref(d.body, "target", "semigroupoids", d.id);
          for (auto const& [k, v] : d.body.at("map").items()) {
            arrow(src, k, d.id);
            arrow(tgt, v.get<std::string>(), d.id);
          }
        }
        for (auto const& d : f_.actions) {
          std::string const actor = actor_base(d);
          std::string const space = ref(d.body, "space", "semigroupoids", d.id);
          for (auto const& [s, m] : d.body.at("maps").items()) {
            arrow(actor, s, d.id);
            auto const& dom = m.at("dom");
            auto const& img = m.at("img");
            if (dom.size() != img.size()) {
              throw ParseError(d.id + ": dom and img of '" + s + "' differ in length");
            }
            for (auto const& a : dom) {
              arrow(space, a.get<std::string>(), d.id);
            }
            for (auto const& a : img) {
              arrow(space, a.get<std::string>(), d.id);
            }
          }
        }
        for (auto const& d : f_.algebras) {
          if (!d.body.contains("basis") || !d.body["basis"].is_array()) {
            throw ParseError(d.id + ": missing 'basis' array");
          }
          std::set<std::string> labels;
          for (auto const& l : d.body["basis"]) {
            labels.insert(l.get<std::string>());
          }
          auto label = [&](std::string const& l) {
            if (!labels.count(l)) {
              throw ParseError(d.id + ": unknown basis element '" + l + "'");
            }
          };
          for (auto const& p : d.body.value("products", json::array())) {
            label(p.at(0).get<std::string>());
            label(p.at(1).get<std::string>());
            for (auto const& t : p.at(2)) {
              label(t.at(0).get<std::string>());
            }
          }
          if (d.body.contains("grading")) {
            std::string const by = ref(d.body["grading"], "by", "semigroupoids", d.id);
            for (auto const& [l, g] : d.body["grading"].at("degree").items()) {
              label(l);
              arrow(by, g.get<std::string>(), d.id);
            }
          }
        }
        for (auto const& d : f_.bundles) {
          std::string const base = ref(d.body, "base", "semigroupoids", d.id);
          for (char const* key : {"ranks", "labels"}) {
            for (auto const& [a, v] : field(d.body, key).items()) {
              arrow(base, a, d.id);
              (void)v;
            }
          }
          for (char const* key : {"constants", "twist"}) {
            for (auto const& [k, v] : field(d.body, key).items()) {
              pair(base, k, ",", d.id);
              (void)v;
            }
          }
        }
        for (auto const& d : f_.bundle_actions) {
          std::string const act    = ref(d.body, "action", "actions", d.id);
          std::string const bundle = ref(d.body, "bundle", "bundles", d.id);
          std::string const actor  = actor_base(*find("actions", act));
          std::string const base   = find("bundles", bundle)->body["base"].get<std::string>();
          for (auto const& [s, m] : field(d.body, "transports").items()) {
            arrow(actor, s, d.id);
            for (auto const& [g, mat] : m.items()) {
              arrow(base, g, d.id);
              (void)mat;
            }
          }
        }
        for (auto const& d : f_.congruences) {
          std::string const bundle = ref(d.body, "bundle", "bundles", d.id);
          std::string const base   = find("bundles", bundle)->body["base"].get<std::string>();
          for (auto const& cls : d.body.at("classes")) {
            for (auto const& a : cls) {
              arrow(base, a.get<std::string>(), d.id);
            }
          }
          for (auto const& [k, v] : field(d.body, "transports").items()) {
            pair(base, k, "->", d.id);
            (void)v;
          }
        }
        for (auto const& t : f_.tasks) {
          std::string const where = "task " + std::to_string(t.index);
          if (t.kind == "validate") {
            if (!f_.kind_of(t.target)) {
              throw ParseError("dangling reference: " + where + " validates undeclared '"
                               + t.target + "'");
            }
          } else {
            std::string const key = t.kind + ":" + t.target;
            for (auto const& p : kRequired.at(key)) {
              if (!t.params.contains(p)) {
                throw ParseError(where + ": " + t.kind + " " + t.target + " needs '" + p + "'");
              }
            }
          }
          for (auto const& [p, kinds] : kParamKinds) {
            if (t.params.contains(p)) {
              ref(t.params, p.c_str(), kinds.front(), where);
            }
          }
        }
      }

     private:
      WorkspaceFile&               f_;
      std::map<std::string, Names> names_;

      Declaration const* find(std::string const& stanza, std::string const& id) const {
        auto const& list = stanza == "semigroupoids"           ? f_.semigroupoids
                           : stanza == "inverse_semigroupoids" ? f_.inverse_semigroupoids
                           : stanza == "homomorphisms"         ? f_.homomorphisms
                           : stanza == "actions"               ? f_.actions
                           : stanza == "algebras"              ? f_.algebras
                           : stanza == "bundles"               ? f_.bundles
                           : stanza == "bundle_actions"        ? f_.bundle_actions
                                                               : f_.congruences;
        for (auto const& d : list) {
          if (d.id == id) {
            return &d;
          }
        }
        return nullptr;
      }

      std::string ref(json const& j, char const* key, std::string const& stanza,
                      std::string const& where) const {
        std::string const id = str(j, key, where);
        if (!find(stanza, id)) {
          throw ParseError("dangling reference: " + where + "." + key + " names undeclared "
                           + stanza.substr(0, stanza.size() - 1) + " '" + id + "'");
        }
        return id;
      }

      std::string actor_base(Declaration const& d) const {
        std::string const actor = str(d.body, "actor", d.id);
        if (auto const* inv = find("inverse_semigroupoids", actor)) {
          return inv->body["base"].get<std::string>();
        }
        if (find("semigroupoids", actor)) {
          return actor;
        }
        throw ParseError("dangling reference: " + d.id + ".actor names undeclared structure '"
                         + actor + "'");
      }

      void arrow(std::string const& sg, std::string const& name, std::string const& where) const {
        if (!names_.at(sg).arrows.count(name)) {
          throw ParseError("dangling reference: " + where + " names arrow '" + name
                           + "' which is not in '" + sg + "'");
        }
      }

      void pair(std::string const& sg, std::string const& k, std::string const& sep,
                std::string const& where) const {
        auto const& arrows = names_.at(sg).arrows;
        if (split_pair(k, sep, [&](std::string const& a) { return arrows.count(a) > 0; })) {
          return;
        }
        auto const p = k.find(sep);
        if (p == std::string::npos) {
          throw ParseError(where + ": pair key '" + k + "' is not of the form 'a" + sep + "b'");
        }
        arrow(sg, k.substr(0, p), where);
        arrow(sg, k.substr(p + sep.size()), where);
        throw ParseError("dangling reference: " + where + " key '" + k
                         + "' does not split into two arrows of '" + sg + "'");
      }

      void semigroupoid(Declaration& d) {
        if (d.body.contains("catalog")) {
          d.body = expand_catalog(d.body);
        }
        Names n;
        for (auto const& v : d.body.at("vertices")) {
          n.vertices.insert(v.get<std::string>());
        }
        for (auto const& a : d.body.at("arrows")) {
          std::string const id = str(a, "id", d.id);
          for (char const* end : {"src", "rng"}) {
            if (!n.vertices.count(str(a, end, d.id + "." + id))) {
              throw ParseError("dangling reference: " + d.id + "." + id + "." + end
                               + " names undeclared vertex '" + a[end].get<std::string>() + "'");
            }
          }
          n.arrows.insert(id);
        }
        names_[d.id] = std::move(n);
        for (auto const& p : d.body.value("prod", json::array())) {
          if (!p.is_array() || p.size() != 3) {
            throw ParseError(d.id + ": product entries are [a, b, ab] triples");
          }
          for (auto const& a : p) {
            arrow(d.id, a.get<std::string>(), d.id);
          }
        }
      }
    };

    template <typename T>
    ValidationReport dependency(Checked<T> const& c, std::string const& id) {
      return ValidationReport(c.report()).in_stage(id);
    }

    Vector read_vector(Ring const& ring, json const& j, std::size_t n, std::string const& where) {
      if (!j.is_array() || j.size() != n) {
        throw InputError(where + ": expected a vector of length " + std::to_string(n));
      }
      Vector v;
      for (auto const& x : j) {
        v.push_back(ring.scalar_from_json(x));
      }
      return v;
    }

    Matrix read_matrix(Ring const& ring, json const& j, std::string const& where) {
      if (!j.is_array()) {
        throw InputError(where + ": a matrix is an array of rows");
      }
      std::size_t const rows = j.size();
      std::size_t const cols = rows == 0 ? 0 : j[0].size();
      Matrix            m(rows, cols);
      for (std::size_t r = 0; r < rows; ++r) {
        Vector const row = read_vector(ring, j[r], cols, where);
        for (std::size_t c = 0; c < cols; ++c) {
          m.at(r, c) = row[c];
        }
      }
      return m;
    }

    std::pair<std::string, std::string> split(Semigroupoid const& g, std::string const& k,
                                              std::string const& sep) {
      auto p = split_pair(k, sep, [&](std::string const& a) { return g.find_arrow(a).has_value(); });
      if (!p) {
        throw InputError("'" + k + "' is not a pair of arrows of " + g.id());
      }
      return *p;
    }
  }  // namespace

  std::optional<std::string> WorkspaceFile::kind_of(std::string const& id) const {
    std::vector<std::pair<std::string, std::vector<Declaration> const*>> const all = {
        {"semigroupoids", &semigroupoids}, {"inverse_semigroupoids", &inverse_semigroupoids},
        {"homomorphisms", &homomorphisms}, {"actions", &actions},
        {"algebras", &algebras},           {"bundles", &bundles},
        {"bundle_actions", &bundle_actions}, {"congruences", &congruences}};
    for (auto const& [name, list] : all) {
      for (auto const& d : *list) {
        if (d.id == id) {
          return name;
        }
      }
    }
    return std::nullopt;
  }

  WorkspaceFile parse_workspace(std::string_view text) {
    json j;
    try {
      j = json::parse(text.begin(), text.end());
    } catch (json::parse_error const& e) {
      throw ParseError(position(text, e.byte) + ": malformed JSON (" + e.what() + ")");
    }
    if (!j.is_object()) {
      throw ParseError("a structure file is a JSON object");
    }
    WorkspaceFile f;
    try {
      for (auto const& [key, v] : j.items()) {
        bool const known = key == "ring" || key == "tasks" || key == "description"
                           || std::find(kStanzas.begin(), kStanzas.end(), key) != kStanzas.end();
        if (!known) {
          throw ParseError("unknown stanza '" + key + "'");
        }
        (void)v;
      }
      if (!j.contains("ring")) {
        throw ParseError("missing 'ring' stanza");
      }
      f.ring = j["ring"];
      std::set<std::string> ids;
      std::vector<std::vector<Declaration>*> lists = {
          &f.semigroupoids, &f.inverse_semigroupoids, &f.homomorphisms, &f.actions,
          &f.algebras,      &f.bundles,               &f.bundle_actions, &f.congruences};
      for (std::size_t s = 0; s < kStanzas.size(); ++s) {
        if (!j.contains(kStanzas[s])) {
          continue;
        }
        if (!j[kStanzas[s]].is_array()) {
          throw ParseError("'" + kStanzas[s] + "' must be an array");
        }
        for (auto const& d : j[kStanzas[s]]) {
          if (!d.is_object()) {
            throw ParseError("entries of '" + kStanzas[s] + "' must be objects");
          }
          std::string const id = str(d, "id", kStanzas[s]);
          if (!ids.insert(id).second) {
            throw ParseError("duplicate id '" + id + "'");
          }
          lists[s]->push_back({id, d});
        }
      }
      std::set<std::string> task_ids;
      for (auto const& t : j.value("tasks", json::array())) {
        TaskSpec spec;
        spec.index           = f.tasks.size();
        std::string const at = "task " + std::to_string(spec.index);
        spec.kind            = str(t, "kind", at);
        if (spec.kind == "validate") {
          spec.target = str(t, "target", at);
        } else if (spec.kind == "verify") {
          spec.target = str(t, "theorem", at);
          if (!kVerify.count(spec.target)) {
            throw ParseError(at + ": unknown theorem '" + spec.target + "'");
          }
        } else if (spec.kind == "build") {
          spec.target = str(t, "construction", at);
          if (!kBuild.count(spec.target)) {
            throw ParseError(at + ": unknown construction '" + spec.target + "'");
          }
        } else {
          throw ParseError(at + ": task kind '" + spec.kind
                           + "' is not one of validate, build, verify");
        }
        spec.id = t.value("id", spec.kind + "-" + std::to_string(spec.index));
        if (!task_ids.insert(spec.id).second) {
          throw ParseError("duplicate task id '" + spec.id + "'");
        }
        if (t.contains("seed")) {
          spec.seed = t["seed"].get<std::uint64_t>();
        }
        for (auto const& [k, v] : t.items()) {
          if (k != "kind" && k != "id" && k != "seed" && k != "theorem" && k != "construction"
              && k != "target") {
            spec.params[k] = v;
          }
        }
        f.tasks.push_back(std::move(spec));
      }
      Resolver(f).run();
    } catch (json::exception const& e) {
      throw ParseError(std::string("malformed stanza: ") + e.what());
    }
    return f;
  }

  WorkspaceFile parse_workspace_file(std::string const& path) {
    std::ifstream in(path);
    if (!in) {
      throw ParseError("cannot read '" + path + "'");
    }
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_workspace(buf.str());
  }

  // ---------------------------------------------------------------------------

  Workspace::Workspace(WorkspaceFile file, std::optional<Ring> ring_override, ExecPolicy policy)
      : file_(std::move(file)), ring_(Ring::rationals()), policy_(policy) {
    if (ring_override) {
      ring_ = *ring_override;
    } else {
      auto r = ring_from_json(file_.ring);
      if (!r) {
        throw InputError("ring stanza rejected: " + r.report().to_string());
      }
      ring_ = std::move(r).value();
    }
  }

  namespace {
    template <typename T, typename Build>
    Checked<T> cached(std::map<std::string, Checked<T>>& cache, std::string const& id,
                      Build&& build) {
      if (auto it = cache.find(id); it != cache.end()) {
        return it->second;
      }
      Checked<T> out = build();
      cache.emplace(id, out);
      return out;
    }

    Declaration const& lookup(std::vector<Declaration> const& list, std::string const& id,
                              char const* kind) {
      for (auto const& d : list) {
        if (d.id == id) {
          return d;
        }
      }
      throw InputError(std::string("no ") + kind + " named '" + id + "'");
    }
  }  // namespace

  Checked<SemigroupoidRef> Workspace::semigroupoid(std::string const& id) {
    return cached(semigroupoids_, id, [&]() -> Checked<SemigroupoidRef> {
      json const&              j = lookup(file_.semigroupoids, id, "semigroupoid").body;
      std::vector<std::string> vertices = j.at("vertices").get<std::vector<std::string>>();
      std::vector<std::string> arrows;
      std::vector<VertexId>    src, rng;
      auto vertex = [&](std::string const& v) {
        return static_cast<VertexId>(std::find(vertices.begin(), vertices.end(), v)
                                     - vertices.begin());
      };
      for (auto const& a : j.at("arrows")) {
        arrows.push_back(a["id"].get<std::string>());
        src.push_back(vertex(a["src"].get<std::string>()));
        rng.push_back(vertex(a["rng"].get<std::string>()));
      }
      std::size_t const n = arrows.size();
      auto arrow = [&](std::string const& a) {
        return static_cast<ArrowId>(std::find(arrows.begin(), arrows.end(), a) - arrows.begin());
      };
      SemigroupoidTables t{id, vertices, arrows, src, rng, std::vector<ArrowId>(n * n, kNoArrow)};
      for (auto const& p : j.value("prod", json::array())) {
        t.prod[arrow(p[0].get<std::string>()) * n + arrow(p[1].get<std::string>())] =
            arrow(p[2].get<std::string>());
      }
      auto s = Semigroupoid::validate(std::move(t), policy_);
      if (!s) {
        return dependency(s, id);
      }
      return share(std::move(s).value());
    });
  }

  Checked<InverseSemigroupoidRef> Workspace::inverse(std::string const& id) {
    return cached(inverses_, id, [&]() -> Checked<InverseSemigroupoidRef> {
      std::string base_id = id;
      json const* inv     = nullptr;
      for (auto const& d : file_.inverse_semigroupoids) {
        if (d.id == id) {
          base_id = d.body["base"].get<std::string>();
          inv     = d.body.contains("inv") ? &d.body["inv"] : nullptr;
        }
      }
      auto base = semigroupoid(base_id);
      if (!base) {
        return dependency(base, id);
      }
      SemigroupoidRef const& b = base.value();
      Checked<InverseSemigroupoid> s = [&]() -> Checked<InverseSemigroupoid> {
        if (!inv) {
          return InverseSemigroupoid::infer(b);
        }
        std::vector<ArrowId> table(b->num_arrows(), kNoArrow);
        for (auto const& [k, v] : inv->items()) {
          table[b->arrow(k)] = b->arrow(v.get<std::string>());
        }
        if (std::count(table.begin(), table.end(), kNoArrow) != 0) {
          return structural_fail("structure", "inverse table does not cover every arrow");
        }
        return InverseSemigroupoid::validate(b, std::move(table));
      }();
      if (!s) {
        return dependency(s, id);
      }
      return std::make_shared<InverseSemigroupoid const>(std::move(s).value());
    });
  }

  Checked<std::shared_ptr<Homomorphism const>> Workspace::homomorphism(std::string const& id) {
    return cached(homomorphisms_, id, [&]() -> Checked<std::shared_ptr<Homomorphism const>> {
      json const& j   = lookup(file_.homomorphisms, id, "homomorphism").body;
      auto        src = semigroupoid(j["source"].get<std::string>());
      auto        tgt = semigroupoid(j["target"].get<std::string>());
      if (!src) {
        return dependency(src, id);
      }
      if (!tgt) {
        return dependency(tgt, id);
      }
      std::vector<ArrowId> map(src.value()->num_arrows(), kNoArrow);
      for (auto const& [k, v] : j.at("map").items()) {
        map[src.value()->arrow(k)] = tgt.value()->arrow(v.get<std::string>());
      }
      if (std::count(map.begin(), map.end(), kNoArrow) != 0) {
        return structural_fail("structure", id + " does not map every arrow");
      }
      auto h = Homomorphism::validate(src.value(), tgt.value(), std::move(map), id);
      if (!h) {
        return dependency(h, id);
      }
      return std::make_shared<Homomorphism const>(std::move(h).value());
    });
  }

  Checked<LandPreactionRef> Workspace::action(std::string const& id) {
    return cached(actions_, id, [&]() -> Checked<LandPreactionRef> {
      json const& j     = lookup(file_.actions, id, "action").body;
      auto        actor = inverse(j["actor"].get<std::string>());
      auto        space = semigroupoid(j["space"].get<std::string>());
      if (!actor) {
        return dependency(actor, id);
      }
      if (!space) {
        return dependency(space, id);
      }
      Semigroupoid const& S = actor.value()->base();
      Semigroupoid const& L = *space.value();
      ActionGraphs        graphs(S.num_arrows());
      for (auto const& [s, m] : j.at("maps").items()) {
        auto& g = graphs[S.arrow(s)];
        for (std::size_t i = 0; i < m["dom"].size(); ++i) {
          g.emplace_back(L.arrow(m["dom"][i].get<std::string>()),
                         L.arrow(m["img"][i].get<std::string>()));
        }
      }
      auto a = LandPreaction::validate(actor.value(), space.value(), std::move(graphs), id);
      if (!a) {
        return dependency(a, id);
      }
      return std::make_shared<LandPreaction const>(std::move(a).value());
    });
  }

  Checked<AlgebraRef> Workspace::algebra(std::string const& id) {
    return cached(algebras_, id, [&]() -> Checked<AlgebraRef> {
      json const&              j      = lookup(file_.algebras, id, "algebra").body;
      std::vector<std::string> labels = j["basis"].get<std::vector<std::string>>();
      std::size_t const        n      = labels.size();
      auto label = [&](json const& l) {
        return static_cast<std::size_t>(
            std::find(labels.begin(), labels.end(), l.get<std::string>()) - labels.begin());
      };
      std::vector<Vector> dense(n * n, Vector(n));
      for (auto const& p : j.value("products", json::array())) {
        Vector& v = dense[label(p[0]) * n + label(p[1])];
        for (auto const& t : p[2]) {
          std::size_t const k = label(t[0]);
          v[k]                = ring_.add(v[k], ring_.scalar_from_json(t[1]));
        }
      }
      StructureConstants sc;
      sc.n = n;
      for (auto const& v : dense) {
        sc.table.push_back(to_sparse(v));
      }
      std::optional<Grading> grading;
      if (j.contains("grading")) {
        auto by = semigroupoid(j["grading"]["by"].get<std::string>());
        if (!by) {
          return dependency(by, id);
        }
        Grading g{by.value(), std::vector<ArrowId>(n, kNoArrow)};
        for (auto const& [l, a] : j["grading"]["degree"].items()) {
          g.degree[label(json(l))] = by.value()->arrow(a.get<std::string>());
        }
        if (std::count(g.degree.begin(), g.degree.end(), kNoArrow) != 0) {
          return structural_fail("structure", id + ": every basis element needs a degree");
        }
        grading = std::move(g);
      }
      auto a = AlgebraPresentation::validate(ring_, std::move(labels), std::move(sc),
                                             j.value("provenance", id), std::move(grading),
                                             policy_);
      if (!a) {
        return dependency(a, id);
      }
      return share(std::move(a).value());
    });
  }

  Checked<BundleRef> Workspace::bundle(std::string const& id) {
    return cached(bundles_, id, [&]() -> Checked<BundleRef> {
      json const& j    = lookup(file_.bundles, id, "bundle").body;
      auto        base = semigroupoid(j["base"].get<std::string>());
      if (!base) {
        return dependency(base, id);
      }
      Semigroupoid const& G = *base.value();
      BundleData          d;
      d.id = id;
      std::string const mode = j.value("mode", std::string("sc"));
      if (mode == "ringfiber") {
        d.mode = BundleMode::ring_fiber;
      } else if (mode != "sc") {
        return structural_fail("structure", id + ": mode must be 'sc' or 'ringfiber'");
      }
      d.ranks.assign(G.num_arrows(), 1);
      for (auto const& [a, k] : field(j, "ranks").items()) {
        d.ranks[G.arrow(a)] = k.get<std::size_t>();
      }
      if (j.contains("labels")) {
        d.fiber_labels.resize(G.num_arrows());
        for (ArrowId g = 0; g < G.num_arrows(); ++g) {
          for (std::size_t i = 0; i < d.ranks[g]; ++i) {
            d.fiber_labels[g].push_back(d.ranks[g] == 1 ? "1" : "e" + std::to_string(i));
          }
        }
        for (auto const& [a, l] : j["labels"].items()) {
          d.fiber_labels[G.arrow(a)] = l.get<std::vector<std::string>>();
        }
      }
      for (auto const& [k, c] : field(j, "constants").items()) {
        auto [a, b]       = split(G, k, ",");
        ArrowId const x   = G.arrow(a), y = G.arrow(b);
        std::size_t const out = G.composable(x, y) ? d.ranks[G.prod(x, y)] : 0;
        PairConstants     pc;
        if (!c.is_array() || c.size() != d.ranks[x]) {
          return structural_fail("rank-mismatch", id + ": constants for '" + k
                                                      + "' need one row per basis element over "
                                                      + a);
        }
        for (auto const& row : c) {
          if (!row.is_array() || row.size() != d.ranks[y]) {
            return structural_fail("rank-mismatch", id + ": constants for '" + k
                                                        + "' need one entry per basis element over "
                                                        + b);
          }
          std::vector<Vector> r;
          for (auto const& v : row) {
            r.push_back(read_vector(ring_, v, out, id + " constants " + k));
          }
          pc.push_back(std::move(r));
        }
        d.constants.emplace(std::make_pair(x, y), std::move(pc));
      }
      for (auto const& [k, t] : field(j, "twist").items()) {
        auto [a, b] = split(G, k, ",");
        d.twist.emplace(std::make_pair(G.arrow(a), G.arrow(b)), ring_.scalar_from_json(t));
      }
      auto out = Bundle::validate(ring_, base.value(), std::move(d), policy_);
      if (!out) {
        return dependency(out, id);
      }
      return share(std::move(out).value());
    });
  }

  Checked<std::shared_ptr<BundleAction const>> Workspace::bundle_action(std::string const& id) {
    return cached(bundle_actions_, id, [&]() -> Checked<std::shared_ptr<BundleAction const>> {
      json const& j   = lookup(file_.bundle_actions, id, "bundle action").body;
      auto        act = action(j["action"].get<std::string>());
      auto        b   = bundle(j["bundle"].get<std::string>());
      if (!act) {
        return dependency(act, id);
      }
      if (!b) {
        return dependency(b, id);
      }
      LandPreaction const& th = *act.value();
      Semigroupoid const&  S  = th.actor().base();
      Semigroupoid const&  G  = th.space();
      if (!(G == b.value()->base())) {
        return structural_fail("structure", id + ": the action's space is not the bundle's base");
      }
      std::vector<std::map<ArrowId, Matrix>> tr(S.num_arrows());
      for (ArrowId s = 0; s < S.num_arrows(); ++s) {
        for (ArrowId g : th.dom(s)) {
          std::size_t const k = b.value()->rank(g);
          if (b.value()->rank(th.apply(s, g)) == k) {
            tr[s].emplace(g, Matrix::identity(ring_, k));
          }
        }
      }
      for (auto const& [s, m] : field(j, "transports").items()) {
        for (auto const& [g, mat] : m.items()) {
          tr[S.arrow(s)][G.arrow(g)] = read_matrix(ring_, mat, id + " transports " + s + "," + g);
        }
      }
      auto out = BundleAction::validate(act.value(), b.value(), std::move(tr), id);
      if (!out) {
        return dependency(out, id);
      }
      return std::make_shared<BundleAction const>(std::move(out).value());
    });
  }

  Checked<std::shared_ptr<BundleCongruence const>> Workspace::congruence(std::string const& id) {
    return cached(congruences_, id, [&]() -> Checked<std::shared_ptr<BundleCongruence const>> {
      json const& j = lookup(file_.congruences, id, "congruence").body;
      auto        b = bundle(j["bundle"].get<std::string>());
      if (!b) {
        return dependency(b, id);
      }
      Semigroupoid const&               G = b.value()->base();
      std::vector<std::vector<ArrowId>> classes;
      std::vector<bool>                 seen(G.num_arrows(), false);
      for (auto const& cls : j.at("classes")) {
        std::vector<ArrowId> c;
        for (auto const& a : cls) {
          ArrowId const g = G.arrow(a.get<std::string>());
          if (seen[g]) {
            return structural_fail("structure", id + ": arrow '" + G.arrow_name(g)
                                                    + "' is in two classes");
          }
          seen[g] = true;
          c.push_back(g);
        }
        classes.push_back(std::move(c));
      }
      for (ArrowId g = 0; g < G.num_arrows(); ++g) {
        if (!seen[g]) {
          classes.push_back({g});
        }
      }
      auto rc = RigidCongruence::validate(b.value()->base_ref(), std::move(classes));
      if (!rc) {
        return dependency(rc, id);
      }
      std::map<std::pair<ArrowId, ArrowId>, Matrix> given;
      for (auto const& [k, m] : field(j, "transports").items()) {
        auto [x, y] = split(G, k, "->");
        given.emplace(std::make_pair(G.arrow(x), G.arrow(y)),
                      read_matrix(ring_, m, id + " transports " + k));
      }
      auto out = BundleCongruence::validate(b.value(), std::move(rc).value(), std::move(given), id);
      if (!out) {
        return dependency(out, id);
      }
      return std::make_shared<BundleCongruence const>(std::move(out).value());
    });
  }

  std::optional<ValidationReport> Workspace::validate(std::string const& id) {
    auto kind = file_.kind_of(id);
    if (!kind) {
      throw InputError("no structure named '" + id + "'");
    }
    auto report = [](auto const& c) -> std::optional<ValidationReport> {
      if (c) {
        return std::nullopt;
      }
      return c.report();
    };
    if (*kind == "semigroupoids") {
      return report(semigroupoid(id));
    }
    if (*kind == "inverse_semigroupoids") {
      return report(inverse(id));
    }
    if (*kind == "homomorphisms") {
      return report(homomorphism(id));
    }
    if (*kind == "actions") {
      return report(action(id));
    }
    if (*kind == "algebras") {
      return report(algebra(id));
    }
    if (*kind == "bundles") {
      return report(bundle(id));
    }
    if (*kind == "bundle_actions") {
      return report(bundle_action(id));
    }
    return report(congruence(id));
  }

  nlohmann::json algebra_to_json(AlgebraPresentation const& a, std::string const& id) {
    nlohmann::json j = a.to_json();
    j.erase("ring");
    j["id"] = id;
    return j;
  }

}  // namespace sectional
