#include "sectional/runner.hpp"

#include <chrono>
#include <ctime>
#include <iomanip>
#include <random>
#include <sstream>

namespace sectional {

  namespace {
    using nlohmann::json;

    int status_code(std::string const& status) {
      if (status == "pass") {
        return 0;
      }
      return status == "invalid" ? 2 : 1;
    }

    json report_status(ValidationReport const& r) {
      return {{"status", r.structural ? "invalid" : "fail"}, {"failure", r.to_json()}};
    }

    template <typename T>
    T need(Checked<T> c) {
      if (!c) {
        throw c.report();
      }
      return std::move(c).value();
    }

    json homomorphism_json(Homomorphism const& h) {
      json map = json::object();
      for (ArrowId a = 0; a < h.source().num_arrows(); ++a) {
        map[h.source().arrow_name(a)] = h.target().arrow_name(h(a));
      }
      return {{"id", h.id()}, {"source", h.source().id()}, {"target", h.target().id()},
              {"map", map}};
    }

    json bundle_summary(Workspace& ws, BundleRef const& b, std::uint64_t seed,
                        std::size_t samples) {
      std::mt19937_64 gen(seed);
      std::size_t     bad = 0;
      for (std::size_t n = 0; n < samples; ++n) {
        Section const x = Section::random(b, gen);
        Section const y = Section::random(b, gen);
        Section const z = Section::random(b, gen);
        if (!(convolve(convolve(x, y), z) == convolve(x, convolve(y, z)))) {
          ++bad;
        }
      }
      (void)ws;
      return {{"rank", b->total_rank()},
              {"convolution_samples", samples},
              {"convolution_associative", bad == 0},
              {"convolution_failures", bad}};
    }

    json structure_summary(Workspace& ws, std::string const& id, std::string const& kind,
                           std::uint64_t seed, std::size_t samples) {
      if (kind == "semigroupoids") {
        auto const& s = need(ws.semigroupoid(id));
        return {{"arrows", s->num_arrows()}, {"vertices", s->num_vertices()},
                {"groupoid", is_groupoid(*s).ok}};
      }
      if (kind == "inverse_semigroupoids") {
        auto const& s = need(ws.inverse(id));
        return {{"arrows", s->base().num_arrows()}, {"idempotents", s->idempotents().size()}};
      }
      if (kind == "actions") {
        auto const& a = need(ws.action(id));
        return {{"associative", a->is_associative()}};
      }
      if (kind == "algebras") {
        auto const& a = need(ws.algebra(id));
        return {{"rank", a->rank()}, {"graded", a->is_graded()}};
      }
      if (kind == "bundles") {
        return bundle_summary(ws, need(ws.bundle(id)), seed, samples);
      }
      if (kind == "homomorphisms") {
        auto const& h = need(ws.homomorphism(id));
        return {{"rigid", h->is_rigid()}};
      }
      if (kind == "bundle_actions") {
        need(ws.bundle_action(id));
        return json::object();
      }
      auto const& c = need(ws.congruence(id));
      return {{"classes", c->base().classes().size()}};
    }

    json verify(Workspace& ws, TaskSpec const& t) {
      json const&       p      = t.params;
      ExecPolicy const  policy = ws.policy();
      auto              param  = [&](char const* k) { return p[k].get<std::string>(); };
      TheoremReport     report;
      if (t.target == "tensor") {
        report = tensor_theorem(need(ws.bundle(param("bundle"))),
                                need(ws.semigroupoid(param("semigroupoid"))), policy)
                     .report;
      } else if (t.target == "crossed") {
        auto out = crossed_theorem(*need(ws.bundle_action(param("bundle_action"))), policy);
        report   = need(out).report;
      } else if (t.target == "smash") {
        auto out = smash_theorem(need(ws.bundle(param("bundle"))),
                                 *need(ws.homomorphism(param("grading"))), policy);
        report   = need(out).report;
      } else if (t.target == "quotient") {
        report = quotient_map_and_kernel(*need(ws.congruence(param("congruence"))), policy).report;
      } else {
        AlgebraRef a = p.contains("algebra") ? need(ws.algebra(param("algebra")))
                                             : share(ring_as_algebra(ws.ring()));
        auto out     = germ_corollary(need(ws.action(param("action"))), a, policy);
        report       = need(out).report;
      }
      report.instance = t.id;
      json j          = report.to_json();
      j["status"]     = report.passed() ? "pass" : "fail";
      return j;
    }

    std::string now_iso() {
      std::time_t const now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
      std::tm           tm{};
      gmtime_r(&now, &tm);
      std::ostringstream out;
      out << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
      return out.str();
    }

    json header(RunOptions const& opt) {
      json j;
      j["tool"]    = "sectional";
      j["command"] = opt.command;
      if (opt.command == "verify") {
        j["theorem"] = opt.theorem;
      }
      j["seed"]          = opt.seed;
      j["ring_override"] = opt.ring_override ? json(*opt.ring_override) : json(nullptr);
      if (opt.timestamp) {
        j["timestamp"] = now_iso();
      }
      return j;
    }

    std::optional<Ring> override_ring(RunOptions const& opt) {
      if (!opt.ring_override) {
        return std::nullopt;
      }
      return ring_from_override(*opt.ring_override);
    }

    RunResult finish(json report, std::vector<json> const& inputs) {
      int         exit_code = 0;
      std::size_t passed = 0, failed = 0, invalid = 0, capability = 0;
      for (auto const& in : inputs) {
        if (in.value("status", "ok") != "ok") {
          exit_code = 2;
          ++invalid;
          continue;
        }
        for (auto const& t : in["tasks"]) {
          std::string const s = t["status"].get<std::string>();
          exit_code           = std::max(exit_code, status_code(s));
          passed += s == "pass";
          failed += s == "fail" || s == "internal";
          invalid += s == "invalid";
          capability += s == "capability";
        }
      }
      report["inputs"]    = inputs;
      report["summary"]   = {{"passed", passed},
                             {"failed", failed},
                             {"invalid", invalid},
                             {"capability", capability}};
      report["exit_code"] = exit_code;
      return {std::move(report), exit_code};
    }

    template <typename Body>
    json guarded(Body&& body) {
      try {
        return body();
      } catch (ValidationReport const& r) {
        return report_status(r);
      } catch (CapabilityError const& e) {
        return {{"status", "capability"}, {"code", "capability"}, {"message", e.what()}};
      } catch (InternalError const& e) {
        return {{"status", "internal"}, {"message", e.what()}};
      } catch (InputError const& e) {
        return {{"status", "invalid"}, {"message", e.what()}};
      } catch (nlohmann::json::exception const& e) {
        return {{"status", "invalid"}, {"message", e.what()}};
      }
    }
  }  // namespace

  nlohmann::json build_output(Workspace& ws, TaskSpec const& t) {
    json const& p     = t.params;
    auto        param = [&](char const* k) { return p[k].get<std::string>(); };
    json        out;
    out["ring"]          = ws.ring().to_json();
    out["semigroupoids"] = json::array();
    auto add_sg          = [&](Semigroupoid const& s) { out["semigroupoids"].push_back(s.to_json()); };
    if (t.target == "sectional" || t.target == "smash") {
      BundleRef                          b = need(ws.bundle(param("bundle")));
      std::shared_ptr<Homomorphism const> d;
      if (p.contains("grading")) {
        d = need(ws.homomorphism(param("grading")));
        add_sg(d->target());
      }
      AlgebraRef a = share(sectional_algebra(*b, d.get(), ws.policy()));
      if (t.target == "smash") {
        a = need(smash_product(*a, ws.policy())).algebra;
      }
      out["algebras"] = {algebra_to_json(*a, t.id)};
    } else if (t.target == "semidirect") {
      add_sg(*need(semidirect_product(*need(ws.action(param("action"))))).semigroupoid);
    } else if (t.target == "germ") {
      auto g = need(germ_quotient(*need(ws.action(param("action")))));
      add_sg(*g.semidirect.semigroupoid);
      add_sg(*g.quotient.semigroupoid);
    } else if (t.target == "skew") {
      auto const& d = need(ws.homomorphism(param("grading")));
      auto        s = need(skew_product(*d));
      add_sg(d->target());
      add_sg(*s.semigroupoid);
      out["homomorphisms"] = {homomorphism_json(s.grading)};
    } else if (t.target == "quotient") {
      QuotientBundle q = quotient_bundle(*need(ws.congruence(param("congruence"))));
      add_sg(*q.base.semigroupoid);
      out["bundles"] = {q.bundle->to_json()};
    } else if (t.target == "semidirect_bundle") {
      auto s = need(bundle_semidirect(*need(ws.bundle_action(param("bundle_action")))));
      add_sg(*s.base.semigroupoid);
      out["bundles"] = {s.bundle->to_json()};
    } else {
      auto th = need(induced_theta(*need(ws.bundle_action(param("bundle_action"))), ws.policy()));
      auto cp = need(naive_crossed_product(th, nullptr, ws.policy()));
      out["algebras"] = {algebra_to_json(*cp.algebra, t.id)};
    }
    return out;
  }

  nlohmann::json run_task(Workspace& ws, TaskSpec const& t, RunOptions const& opt) {
    auto const start = std::chrono::steady_clock::now();
    json       j     = guarded([&]() -> json {
      std::uint64_t const seed = t.seed.value_or(opt.seed);
      if (t.kind == "validate") {
        auto kind = ws.file().kind_of(t.target);
        if (auto r = ws.validate(t.target)) {
          return report_status(*r);
        }
        json s      = structure_summary(ws, t.target, *kind, seed, opt.samples);
        bool ok     = s.value("convolution_associative", true);
        s["status"] = ok ? "pass" : "fail";
        return s;
      }
      if (t.kind == "build") {
        json const out = build_output(ws, t);
        json       s   = {{"status", "pass"}};
        for (auto const& [k, v] : out.items()) {
          if (v.is_array()) {
            s["built"][k] = v.size();
          }
        }
        return s;
      }
      return verify(ws, t);
    });
    json head = {{"index", t.index}, {"id", t.id}, {"kind", t.kind}, {"target", t.target}};
    head.update(j);
    if (opt.timestamp) {
      head["wall_time_ms"] = std::chrono::duration<double, std::milli>(
                                 std::chrono::steady_clock::now() - start)
                                 .count();
    }
    return head;
  }

  RunResult run_files(std::vector<std::string> const& paths, RunOptions const& opt) {
    set_default_policy(opt.parallel ? ExecPolicy::parallel : ExecPolicy::serial);
    std::vector<json> inputs;
    for (auto const& path : paths) {
      json in = {{"file", path}};
      try {
        Workspace ws(parse_workspace_file(path), override_ring(opt), default_policy());
        in["status"] = "ok";
        in["ring"]   = ws.ring().to_json();
        in["tasks"]  = json::array();
        for (auto const& t : ws.file().tasks) {
          if (opt.theorem != "all" && (t.kind != "verify" || t.target != opt.theorem)) {
            continue;
          }
          in["tasks"].push_back(run_task(ws, t, opt));
        }
      } catch (InputError const& e) {
        in["status"] = "invalid";
        in["error"]  = e.what();
      }
      inputs.push_back(std::move(in));
    }
    return finish(header(opt), inputs);
  }

  RunResult validate_files(std::vector<std::string> const& paths, RunOptions const& opt) {
    set_default_policy(opt.parallel ? ExecPolicy::parallel : ExecPolicy::serial);
    std::vector<json> inputs;
    for (auto const& path : paths) {
      json in = {{"file", path}};
      try {
        Workspace ws(parse_workspace_file(path), override_ring(opt), default_policy());
        in["status"] = "ok";
        in["ring"]   = ws.ring().to_json();
        in["tasks"]  = json::array();
        WorkspaceFile const& f = ws.file();
        std::size_t          i = 0;
        for (auto const* list : {&f.semigroupoids, &f.inverse_semigroupoids, &f.homomorphisms,
                                 &f.actions, &f.algebras, &f.bundles, &f.bundle_actions,
                                 &f.congruences}) {
          for (auto const& d : *list) {
            TaskSpec t;
            t.index  = i++;
            t.id     = "validate-" + d.id;
            t.kind   = "validate";
            t.target = d.id;
            in["tasks"].push_back(run_task(ws, t, opt));
          }
        }
      } catch (InputError const& e) {
        in["status"] = "invalid";
        in["error"]  = e.what();
      }
      inputs.push_back(std::move(in));
    }
    return finish(header(opt), inputs);
  }

  RunResult build_structure(std::string const& path, std::string const& name,
                            RunOptions const& opt) {
    set_default_policy(opt.parallel ? ExecPolicy::parallel : ExecPolicy::serial);
    json report = header(opt);
    report["name"] = name;
    try {
      Workspace ws(parse_workspace_file(path), override_ring(opt), default_policy());
      for (auto const& t : ws.file().tasks) {
        if (t.kind == "build" && t.id == name) {
          json out = guarded([&]() -> json { return {{"status", "pass"}, {"output", build_output(ws, t)}}; });
          int const code = status_code(out["status"].get<std::string>());
          out["exit_code"] = code;
          report.update(out);
          return {report, code};
        }
      }
      auto kind = ws.file().kind_of(name);
      if (!kind) {
        throw InputError("no build task or structure named '" + name + "'");
      }
      json out = guarded([&]() -> json {
        if (auto r = ws.validate(name)) {
          return report_status(*r);
        }
        json doc = {{"ring", ws.ring().to_json()}};
        if (*kind == "semigroupoids") {
          doc["semigroupoids"] = {need(ws.semigroupoid(name))->to_json()};
        } else if (*kind == "bundles") {
          BundleRef b          = need(ws.bundle(name));
          doc["semigroupoids"] = {b->base().to_json()};
          doc["bundles"]       = {b->to_json()};
        } else if (*kind == "algebras") {
          AlgebraRef a = need(ws.algebra(name));
          if (a->is_graded()) {
            doc["semigroupoids"] = {a->grading().by->to_json()};
          }
          doc["algebras"] = {algebra_to_json(*a, name)};
        } else if (*kind == "actions") {
          LandPreactionRef a   = need(ws.action(name));
          doc["semigroupoids"] = {a->actor().base().to_json()};
          if (a->space().id() != a->actor().base().id()) {
            doc["semigroupoids"].push_back(a->space().to_json());
          }
          doc["actions"] = {a->to_json()};
        } else {
          throw InputError("'" + name + "' is not a buildable structure");
        }
        return {{"status", "pass"}, {"output", doc}};
      });
      int const code    = status_code(out["status"].get<std::string>());
      out["exit_code"] = code;
      report.update(out);
      return {report, code};
    } catch (InputError const& e) {
      report["status"]    = "invalid";
      report["error"]     = e.what();
      report["exit_code"] = 2;
      return {report, 2};
    }
  }

  // ---------------------------------------------------------------------------

  std::vector<std::pair<std::string, std::string>> flatten(nlohmann::json const& j) {
    std::vector<std::pair<std::string, std::string>> out;
    auto walk = [&](auto&& self, json const& v, std::string const& path) -> void {
      if (v.is_object() && !v.empty()) {
        for (auto const& [k, x] : v.items()) {
          self(self, x, path.empty() ? k : path + "." + k);
        }
      } else if (v.is_array() && !v.empty()) {
        for (std::size_t i = 0; i < v.size(); ++i) {
          self(self, v[i], path + "[" + std::to_string(i) + "]");
        }
      } else {
        out.emplace_back(path, v.dump());
      }
    };
    walk(walk, j, "");
    return out;
  }

  std::string render_text(nlohmann::json const& report) {
    std::string out;
    for (auto const& [path, value] : flatten(report)) {
      out += path + " = " + value + "\n";
    }
    return out;
  }

  std::vector<std::pair<std::string, std::string>> parse_text(std::string const& text) {
    std::vector<std::pair<std::string, std::string>> out;
    std::istringstream                               in(text);
    std::string                                      line;
    while (std::getline(in, line)) {
      auto const eq = line.find(" = ");
      if (eq != std::string::npos) {
        out.emplace_back(line.substr(0, eq), line.substr(eq + 3));
      }
    }
    return out;
  }

}  // namespace sectional
