#include "lin/config.hpp"

#include <fstream>
#include <set>

#include "lin/error.hpp"
#include "lin/examples.hpp"

namespace lin {

using nlohmann::json;

namespace {

void allow(const json& j, const std::string& where, std::initializer_list<const char*> keys) {
    if (!j.is_object()) throw ConfigError(where + " must be an object");
    const std::set<std::string> ok(keys.begin(), keys.end());
    for (const auto& [k, v] : j.items()) {
        if (!ok.count(k)) throw ConfigError("unknown key " + where + "." + k);
    }
}

double num(const json& j, const std::string& where) {
    if (!j.is_number()) throw ConfigError(where + " must be a number");
    return j.get<double>();
}

double positive(const json& j, const std::string& where) {
    const double v = num(j, where);
    if (!(v > 0.0)) throw ConfigError(where + " must be positive");
    return v;
}

long integer(const json& j, const std::string& where, long lo) {
    if (!j.is_number_integer()) throw ConfigError(where + " must be an integer");
    const long v = j.get<long>();
    if (v < lo) throw ConfigError(where + " must be at least " + std::to_string(lo));
    return v;
}

std::vector<double> num_list(const json& j, const std::string& where) {
    if (!j.is_array() || j.empty()) throw ConfigError(where + " must be a non-empty array");
    std::vector<double> v;
    for (const auto& e : j) v.push_back(num(e, where));
    return v;
}

ExpRate rate(const json& j, const std::string& where) {
    allow(j, where, {"D", "lambda"});
    if (!j.contains("D") || !j.contains("lambda")) throw ConfigError(where + " needs D and lambda");
    return {positive(j["D"], where + ".D"), positive(j["lambda"], where + ".lambda")};
}

Axis axis(const json& j, const std::string& where) {
    allow(j, where, {"lo", "hi", "n"});
    Axis a;
    a.lo = num(j.at("lo"), where + ".lo");
    a.hi = j.contains("hi") ? num(j["hi"], where + ".hi") : a.lo;
    a.n = j.contains("n") ? static_cast<int>(integer(j["n"], where + ".n", 1)) : 1;
    if (a.n > 1 && !(a.hi > a.lo)) throw ConfigError(where + " needs lo < hi");
    return a;
}

}  // namespace

RunConfig parse_config(const json& j) {
    RunConfig c;
    allow(j, "config",
          {"system", "kernel", "numerics", "grid", "solve", "holder", "verify", "oracle", "seed", "output"});
    if (!j.contains("system")) throw ConfigError("config.system is required");
    {
        const auto& s = j["system"];
        allow(s, "system", {"name", "params", "example"});
        if (s.contains("example")) {
            if (s.contains("name") || s.contains("params")) throw ConfigError("system takes a name or an example");
            c.system.example = s["example"].get<std::string>();
        } else {
            if (!s.contains("name") || !s["name"].is_string()) throw ConfigError("system.name is required");
            c.system.catalog = s["name"].get<std::string>();
            if (s.contains("params")) {
                if (!s["params"].is_object()) throw ConfigError("system.params must be an object");
                for (const auto& [k, v] : s["params"].items()) c.system.params[k] = num(v, "system.params." + k);
            }
        }
    }
    if (j.contains("kernel")) {
        const auto& k = j["kernel"];
        allow(k, "kernel", {"envelope", "dichotomy"});
        if (k.contains("envelope")) {
            const auto& e = k["envelope"];
            allow(e, "kernel.envelope", {"forward", "backward"});
            c.kernel.envelope_set = true;
            if (e.contains("forward") && !e["forward"].is_null()) c.kernel.forward = rate(e["forward"], "kernel.envelope.forward");
            if (e.contains("backward") && !e["backward"].is_null()) {
                c.kernel.backward = rate(e["backward"], "kernel.envelope.backward");
            }
        }
        if (k.contains("dichotomy")) {
            const auto& d = k["dichotomy"];
            allow(d, "kernel.dichotomy", {"D1", "D2", "lambda1", "lambda2", "K1", "K2", "a1", "a2"});
            DichotomyData dd;
            double* fields[] = {&dd.D1, &dd.D2, &dd.lambda1, &dd.lambda2, &dd.K1, &dd.K2, &dd.a1, &dd.a2};
            const char* names[] = {"D1", "D2", "lambda1", "lambda2", "K1", "K2", "a1", "a2"};
            for (int i = 0; i < 8; ++i) {
                if (!d.contains(names[i])) throw ConfigError(std::string("kernel.dichotomy.") + names[i] + " missing");
                *fields[i] = positive(d[names[i]], std::string("kernel.dichotomy.") + names[i]);
            }
            c.kernel.dichotomy = dd;
        }
    }
    if (j.contains("numerics")) {
        const auto& n = j["numerics"];
        allow(n, "numerics", {"h_ode", "stride", "window", "tol", "L", "taus", "tau_count"});
        auto& q = c.numerics;
        if (n.contains("h_ode")) q.h_ode = positive(n["h_ode"], "numerics.h_ode");
        if (n.contains("stride")) q.stride = static_cast<int>(integer(n["stride"], "numerics.stride", 1));
        if (n.contains("window")) q.window = positive(n["window"], "numerics.window");
        if (n.contains("tol")) q.tol = positive(n["tol"], "numerics.tol");
        if (n.contains("L") && !n["L"].is_null()) q.L = positive(n["L"], "numerics.L");
        if (n.contains("taus") && !(n["taus"].is_array() && n["taus"].empty())) q.taus = num_list(n["taus"], "numerics.taus");
        if (n.contains("tau_count")) q.tau_count = static_cast<int>(integer(n["tau_count"], "numerics.tau_count", 1));
    }
    if (j.contains("grid")) {
        const auto& g = j["grid"];
        allow(g, "grid", {"nx", "ny", "x_half", "y_half", "tau"});
        if (g.contains("nx")) c.grid.nx = static_cast<int>(integer(g["nx"], "grid.nx", 2));
        if (g.contains("ny")) c.grid.ny = static_cast<int>(integer(g["ny"], "grid.ny", 1));
        if (g.contains("x_half")) c.grid.x_half = positive(g["x_half"], "grid.x_half");
        if (g.contains("y_half")) c.grid.y_half = positive(g["y_half"], "grid.y_half");
        if (g.contains("tau")) c.grid.tau = axis(g["tau"], "grid.tau");
    }
    if (j.contains("solve")) {
        const auto& s = j["solve"];
        allow(s, "solve", {"max_sweeps", "residual_samples"});
        if (s.contains("max_sweeps")) c.max_sweeps = static_cast<int>(integer(s["max_sweeps"], "solve.max_sweeps", 1));
        if (s.contains("residual_samples")) {
            c.residual_samples = static_cast<std::size_t>(integer(s["residual_samples"], "solve.residual_samples", 0));
        }
    }
    if (j.contains("holder")) {
        const auto& h = j["holder"];
        allow(h, "holder", {"C", "alpha", "samples", "pairs", "horizon"});
        if (h.contains("C")) c.holder.C = num_list(h["C"], "holder.C");
        if (h.contains("alpha")) c.holder.alpha = num_list(h["alpha"], "holder.alpha");
        if (h.contains("samples")) c.holder.samples = static_cast<std::size_t>(integer(h["samples"], "holder.samples", 1));
        if (h.contains("pairs")) c.holder.pairs = static_cast<std::size_t>(integer(h["pairs"], "holder.pairs", 1));
        if (h.contains("horizon")) c.holder.horizon = positive(h["horizon"], "holder.horizon");
        for (double a : c.holder.alpha) {
            if (!(a > 0.0 && a < 1.0)) throw ConfigError("holder.alpha entries must lie in (0, 1)");
        }
        for (double v : c.holder.C) {
            if (!(v > 0.0)) throw ConfigError("holder.C entries must be positive");
        }
    }
    if (j.contains("verify")) {
        const auto& v = j["verify"];
        allow(v, "verify", {"samples", "horizon"});
        if (v.contains("samples")) c.verify.samples = static_cast<std::size_t>(integer(v["samples"], "verify.samples", 1));
        if (v.contains("horizon")) c.verify.horizon = positive(v["horizon"], "verify.horizon");
    }
    if (j.contains("oracle")) {
        const auto& o = j["oracle"];
        allow(o, "oracle", {"probes", "K"});
        if (o.contains("probes")) c.oracle.probes = static_cast<std::size_t>(integer(o["probes"], "oracle.probes", 1));
        if (o.contains("K")) c.oracle.K = static_cast<int>(integer(o["K"], "oracle.K", 1));
    }
    if (j.contains("seed")) c.seed = static_cast<std::uint64_t>(integer(j["seed"], "seed", 0));
    if (j.contains("output")) {
        if (!j["output"].is_string()) throw ConfigError("output must be a string");
        c.output = j["output"].get<std::string>();
    }
    // Resolve names now so a bad config fails before any computation.
    try {
        resolve_model(c);
    } catch (const Error& e) {
        throw ConfigError(e.what());
    }
    return c;
}

RunConfig load_config(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot open config " + path);
    json j;
    try {
        is >> j;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
    return parse_config(j);
}

json to_json(const RunConfig& c) {
    json j;
    if (!c.system.example.empty()) {
        j["system"] = {{"example", c.system.example}};
    } else {
        j["system"] = {{"name", c.system.catalog}, {"params", c.system.params}};
        const auto& entry = catalog_entry(c.system.catalog);
        j["system"]["params"] = resolve_params(entry, c.system.params);
    }
    if (c.kernel.envelope_set || c.kernel.dichotomy) {
        json k = json::object();
        if (c.kernel.envelope_set) {
            const auto r = [](const std::optional<ExpRate>& e) {
                return e ? json{{"D", e->D}, {"lambda", e->lambda}} : json(nullptr);
            };
            k["envelope"] = {{"forward", r(c.kernel.forward)}, {"backward", r(c.kernel.backward)}};
        }
        if (c.kernel.dichotomy) {
            const auto& d = *c.kernel.dichotomy;
            k["dichotomy"] = {{"D1", d.D1}, {"D2", d.D2}, {"lambda1", d.lambda1}, {"lambda2", d.lambda2},
                              {"K1", d.K1}, {"K2", d.K2}, {"a1", d.a1},           {"a2", d.a2}};
        }
        j["kernel"] = k;
    }
    const auto& q = c.numerics;
    j["numerics"] = {{"h_ode", q.h_ode},   {"stride", q.stride},       {"window", q.window},
                     {"tol", q.tol},       {"L", q.L ? json(*q.L) : json(nullptr)},
                     {"taus", q.taus},     {"tau_count", q.tau_count}};
    j["grid"] = {{"nx", c.grid.nx}, {"ny", c.grid.ny}};
    if (c.grid.x_half) j["grid"]["x_half"] = *c.grid.x_half;
    if (c.grid.y_half) j["grid"]["y_half"] = *c.grid.y_half;
    if (c.grid.tau) j["grid"]["tau"] = {{"lo", c.grid.tau->lo}, {"hi", c.grid.tau->hi}, {"n", c.grid.tau->n}};
    j["solve"] = {{"max_sweeps", c.max_sweeps}, {"residual_samples", c.residual_samples}};
    j["holder"] = {{"C", c.holder.C},
                   {"alpha", c.holder.alpha},
                   {"samples", c.holder.samples},
                   {"pairs", c.holder.pairs},
                   {"horizon", c.holder.horizon}};
    j["verify"] = {{"samples", c.verify.samples}, {"horizon", c.verify.horizon}};
    j["oracle"] = {{"probes", c.oracle.probes}, {"K", c.oracle.K}};
    j["seed"] = c.seed;
    j["output"] = c.output;
    return j;
}

Model resolve_model(const RunConfig& c) {
    Model m = c.system.example.empty() ? build_model(c.system.catalog, c.system.params)
                                       : load_example(c.system.example).model;
    if (c.kernel.envelope_set) m.kernel.envelope = DecayEnvelope::exponential(c.kernel.forward, c.kernel.backward);
    if (c.kernel.dichotomy) {
        m.kernel.dichotomy = c.kernel.dichotomy;
        const auto& d = *c.kernel.dichotomy;
        m.kernel.growth = GrowthData{d.K1, d.K2, d.a1, d.a2};
    }
    if (c.grid.x_half) m.sys.box.x_half = *c.grid.x_half;
    if (c.grid.y_half) m.sys.box.y_half = *c.grid.y_half;
    return m;
}

GridSpec resolve_grid(const Model& m, const RunConfig& c) {
    Axis tau{0.0, 0.0, 1};
    if (c.grid.tau) {
        tau = *c.grid.tau;
    } else if (!m.sys.autonomous) {
        tau = m.sys.discrete() ? Axis{-5.0, 5.0, 11} : Axis{-5.0, 5.0, 21};
    }
    GridSpec g = box_grid(m, c.grid.nx, c.grid.ny, tau);
    if (c.grid.tau) g.tau = *c.grid.tau;
    return g;
}

SolveConfig resolve_solve(const RunConfig& c) {
    SolveConfig s;
    s.quad = c.numerics;
    s.max_sweeps = c.max_sweeps;
    s.residual_samples = c.residual_samples;
    s.seed = c.seed;
    return s;
}

}  // namespace lin
