#include "chkp/config.hpp"

#include <fstream>
#include <set>

#include <json.hpp>

namespace chkp {

using nlohmann::json;

namespace {

json load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path, "cannot open config file");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(path, std::string("invalid JSON: ") + e.what());
    }
}

std::string join(const std::string& prefix, const std::string& key) {
    return prefix.empty() ? key : prefix + "." + key;
}

// unknown keys are rejected so typos in experiment definitions surface early
void check_keys(const json& j, const std::string& prefix, std::set<std::string> allowed) {
    if (!j.is_object()) throw ConfigError(prefix.empty() ? "(root)" : prefix, "expected an object");
    for (const auto& [key, _] : j.items())
        if (!allowed.count(key)) throw ConfigError(join(prefix, key), "unknown key");
}

const json& need(const json& j, const std::string& prefix, const std::string& key) {
    if (!j.contains(key)) throw ConfigError(join(prefix, key), "missing required key");
    return j.at(key);
}

double need_num(const json& j, const std::string& prefix, const std::string& key) {
    const json& v = need(j, prefix, key);
    if (!v.is_number()) throw ConfigError(join(prefix, key), "expected a number");
    return v.get<double>();
}

double opt_num(const json& j, const std::string& prefix, const std::string& key, double fallback) {
    if (!j.contains(key)) return fallback;
    if (!j.at(key).is_number()) throw ConfigError(join(prefix, key), "expected a number");
    return j.at(key).get<double>();
}

void check_schema_version(const json& j) {
    if (!j.contains("schema_version")) throw ConfigError("schema_version", "missing required key");
    if (j.at("schema_version").get<int>() != 1)
        throw ConfigError("schema_version", "unsupported version (expected 1)");
}

ModelParams parse_model(const json& j, const std::string& prefix) {
    const std::string type = need(j, prefix, "type").get<std::string>();
    try {
        if (type == "chkp") {
            check_keys(j, prefix, {"type", "kappa"});
            return ModelParams(ChkpParams{need_num(j, prefix, "kappa")});
        }
        if (type == "hcp") {
            check_keys(j, prefix, {"type", "alpha", "beta", "gamma"});
            return ModelParams(HcpParams{need_num(j, prefix, "alpha"), need_num(j, prefix, "beta"),
                                         need_num(j, prefix, "gamma")});
        }
        if (type == "chkp_physical") {
            check_keys(j, prefix, {"type", "epsilon", "gamma"});
            return ModelParams(
                ChkpPhysicalParams{need_num(j, prefix, "epsilon"), need_num(j, prefix, "gamma")});
        }
    } catch (const std::invalid_argument& e) {
        throw ConfigError(prefix, e.what());
    }
    throw ConfigError(join(prefix, "type"), "unknown model type '" + type + "'");
}

Grid2D parse_grid(const json& j, const std::string& prefix) {
    check_keys(j, prefix, {"nx", "ny", "lx", "ly"});
    try {
        return Grid2D(int(need_num(j, prefix, "nx")), int(need_num(j, prefix, "ny")),
                      need_num(j, prefix, "lx"), need_num(j, prefix, "ly"));
    } catch (const std::invalid_argument& e) {
        throw ConfigError(prefix, e.what());
    }
}

QuadratureOptions parse_quadrature(const json& j, const std::string& prefix) {
    QuadratureOptions q{1e-8, 400000};
    if (!j.contains("quadrature")) return q;
    const json& s = j.at("quadrature");
    check_keys(s, join(prefix, "quadrature"), {"tol", "max_cells"});
    q.tol = opt_num(s, join(prefix, "quadrature"), "tol", q.tol);
    q.max_cells = long(opt_num(s, join(prefix, "quadrature"), "max_cells", double(q.max_cells)));
    return q;
}

std::vector<double> parse_axis_grid(const json& j, const std::string& prefix) {
    std::vector<double> out;
    if (j.is_array()) {
        for (const auto& v : j) out.push_back(v.get<double>());
    } else if (j.is_object()) {
        check_keys(j, prefix, {"min", "max", "count"});
        const double lo = need_num(j, prefix, "min");
        const double hi = need_num(j, prefix, "max");
        const int n = int(need_num(j, prefix, "count"));
        if (n < 1) throw ConfigError(join(prefix, "count"), "must be >= 1");
        for (int i = 0; i < n; ++i)
            out.push_back(n == 1 ? lo : lo + (hi - lo) * double(i) / double(n - 1));
    } else {
        throw ConfigError(prefix, "expected an array or {min,max,count}");
    }
    if (out.empty()) throw ConfigError(prefix, "empty grid");
    return out;
}

}  // namespace

SimulateConfig parse_simulate_config(const std::string& path) {
    json j = load(path);
    check_keys(j, "", {"schema_version", "seed", "model", "grid", "time", "initial"});
    check_schema_version(j);

    SimulateConfig cfg{0, RunConfig{ModelParams(ChkpParams{}), Grid2D(8, 8, 1, 1), 1.0, 1e-2, 10,
                                    InitialGaussian{}},
                       ""};
    cfg.seed = (unsigned long long)(opt_num(j, "", "seed", 0.0));
    cfg.run.model = parse_model(need(j, "", "model"), "model");

    const json& jt = need(j, "", "time");
    check_keys(jt, "time", {"t_end", "dt", "snapshot_every"});
    cfg.run.t_end = need_num(jt, "time", "t_end");
    cfg.run.dt = need_num(jt, "time", "dt");
    cfg.run.snapshot_every = int(need_num(jt, "time", "snapshot_every"));
    if (cfg.run.t_end < 0.0) throw ConfigError("time.t_end", "must be >= 0");
    if (cfg.run.dt <= 0.0) throw ConfigError("time.dt", "must be > 0");
    if (cfg.run.snapshot_every < 1) throw ConfigError("time.snapshot_every", "must be >= 1");

    const json& ji = need(j, "", "initial");
    const std::string type = need(ji, "initial", "type").get<std::string>();
    if (type == "gaussian") {
        check_keys(ji, "initial", {"type", "amplitude", "x0", "y0", "sigma_x", "sigma_y"});
        InitialGaussian g;
        g.amplitude = need_num(ji, "initial", "amplitude");
        g.x0 = need_num(ji, "initial", "x0");
        g.y0 = need_num(ji, "initial", "y0");
        g.sigma_x = need_num(ji, "initial", "sigma_x");
        g.sigma_y = need_num(ji, "initial", "sigma_y");
        cfg.run.initial = g;
    } else if (type == "mode") {
        check_keys(ji, "initial", {"type", "amplitude", "jx", "ky"});
        InitialMode m;
        m.amplitude = need_num(ji, "initial", "amplitude");
        m.jx = int(need_num(ji, "initial", "jx"));
        m.ky = int(need_num(ji, "initial", "ky"));
        cfg.run.initial = m;
    } else if (type == "random") {
        check_keys(ji, "initial", {"type", "amplitude", "jmax", "kmax"});
        InitialRandom r;
        r.amplitude = need_num(ji, "initial", "amplitude");
        r.jmax = int(need_num(ji, "initial", "jmax"));
        r.kmax = int(need_num(ji, "initial", "kmax"));
        r.seed = cfg.seed;
        cfg.run.initial = r;
    } else if (type == "file") {
        check_keys(ji, "initial", {"type", "path"});
        cfg.initial_file = need(ji, "initial", "path").get<std::string>();
        cfg.run.initial = InitialFile{cfg.initial_file};
    } else {
        throw ConfigError("initial.type", "unknown initial type '" + type + "'");
    }

    if (type == "file") {
        if (j.contains("grid")) cfg.run.grid = parse_grid(j.at("grid"), "grid");
    } else {
        cfg.run.grid = parse_grid(need(j, "", "grid"), "grid");
    }
    return cfg;
}

TwSolveConfig parse_twsolve_config(const std::string& path) {
    json j = load(path);
    check_keys(j, "", {"schema_version", "model", "grid", "solver", "branch"});
    check_schema_version(j);

    TwSolveConfig cfg{parse_model(need(j, "", "model"), "model"),
                      parse_grid(need(j, "", "grid"), "grid"),
                      0.1,
                      std::nullopt,
                      1e-11,
                      150,
                      std::nullopt,
                      std::nullopt};
    const json& js = need(j, "", "solver");
    check_keys(js, "solver", {"amplitude", "c0", "tol", "max_newton", "continuation_from"});
    cfg.amplitude = need_num(js, "solver", "amplitude");
    if (js.contains("c0")) cfg.c0 = need_num(js, "solver", "c0");
    cfg.tol = opt_num(js, "solver", "tol", cfg.tol);
    cfg.max_newton = int(opt_num(js, "solver", "max_newton", cfg.max_newton));
    if (js.contains("continuation_from"))
        cfg.continuation_from = need_num(js, "solver", "continuation_from");

    if (j.contains("branch")) {
        const json& jb = j.at("branch");
        check_keys(jb, "branch", {"dA", "steps"});
        cfg.branch = {need_num(jb, "branch", "dA"), int(need_num(jb, "branch", "steps"))};
    }
    return cfg;
}

WeakResidualConfig parse_weak_residual_config(const std::string& path) {
    json j = load(path);
    check_keys(j, "", {"schema_version", "form", "model", "field", "test_function", "quadrature"});
    check_schema_version(j);

    WeakResidualConfig cfg;
    const std::string form = need(j, "", "form").get<std::string>();
    if (form == "steady")
        cfg.steady = true;
    else if (form == "evolution")
        cfg.steady = false;
    else
        throw ConfigError("form", "expected 'evolution' or 'steady'");

    cfg.model = parse_model(need(j, "", "model"), "model");
    if (cfg.model.is_chkp_physical())
        throw ConfigError("model.type", "weak forms are defined for the normalized models");

    const json& jf = need(j, "", "field");
    const std::string ftype = need(jf, "field", "type").get<std::string>();
    if (ftype != "peakon") throw ConfigError("field.type", "supported closed-form family: 'peakon'");
    check_keys(jf, "field", {"type", "a", "theta", "c"});
    cfg.field = {need_num(jf, "field", "a"), need_num(jf, "field", "theta"),
                 need_num(jf, "field", "c")};

    const json& jt = need(j, "", "test_function");
    check_keys(jt, "test_function", {"t0", "x0", "y0", "rt", "rx", "ry", "amplitude"});
    cfg.test_function.t0 = opt_num(jt, "test_function", "t0", 0.0);
    cfg.test_function.x0 = need_num(jt, "test_function", "x0");
    cfg.test_function.y0 = need_num(jt, "test_function", "y0");
    cfg.test_function.rt = opt_num(jt, "test_function", "rt", 1.0);
    cfg.test_function.rx = need_num(jt, "test_function", "rx");
    cfg.test_function.ry = need_num(jt, "test_function", "ry");
    cfg.test_function.amplitude = opt_num(jt, "test_function", "amplitude", 1.0);

    cfg.quadrature = parse_quadrature(j, "");
    return cfg;
}

PeakonScanConfig parse_peakon_scan_config(const std::string& path) {
    json j = load(path);
    check_keys(j, "", {"schema_version", "theta", "kappa", "a_grid", "c_grid", "basis", "quadrature"});
    check_schema_version(j);

    PeakonScanConfig cfg;
    cfg.theta = need_num(j, "", "theta");
    cfg.kappa = need_num(j, "", "kappa");
    cfg.a_grid = parse_axis_grid(need(j, "", "a_grid"), "a_grid");
    cfg.c_grid = parse_axis_grid(need(j, "", "c_grid"), "c_grid");
    if (j.contains("basis") && !j.at("basis").is_string()) {
        for (std::size_t i = 0; i < j.at("basis").size(); ++i) {
            const json& b = j.at("basis")[i];
            const std::string prefix = "basis[" + std::to_string(i) + "]";
            check_keys(b, prefix, {"x0", "y0", "rx", "ry", "amplitude"});
            cfg.basis.push_back(BumpSpec2{need_num(b, prefix, "x0"), need_num(b, prefix, "y0"),
                                          need_num(b, prefix, "rx"), need_num(b, prefix, "ry"),
                                          opt_num(b, prefix, "amplitude", 1.0)});
        }
    } else if (j.contains("basis") && j.at("basis").get<std::string>() != "default") {
        throw ConfigError("basis", "expected 'default' or an array of test functions");
    }
    cfg.quadrature = parse_quadrature(j, "");
    return cfg;
}

TransformConfig parse_transform_config(const std::string& path) {
    json j = load(path);
    check_keys(j, "", {"schema_version", "epsilon", "gamma", "kappa", "direction"});
    check_schema_version(j);

    TransformConfig cfg;
    cfg.map.epsilon = need_num(j, "", "epsilon");
    cfg.map.gamma_phys = need_num(j, "", "gamma");
    cfg.map.kappa = need_num(j, "", "kappa");
    try {
        cfg.map.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError("epsilon", e.what());
    }
    const std::string dir = need(j, "", "direction").get<std::string>();
    if (dir == "to_physical")
        cfg.to_physical = true;
    else if (dir == "to_normalized")
        cfg.to_physical = false;
    else
        throw ConfigError("direction", "expected 'to_physical' or 'to_normalized'");
    return cfg;
}

}  // namespace chkp
