#pragma once

// Run configuration: a JSON file with "grid", "kernel" and an optional "run"
// section, or one of the named presets.

#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "qfock/error.hpp"
#include "qfock/kernel.hpp"
#include "qfock/symcomb.hpp"

namespace qfock {

enum class Suite { verify, moments, spectrum, converge };
enum class Format { json, csv };

inline std::string suite_name(Suite s) {
    switch (s) {
    case Suite::verify: return "verify";
    case Suite::moments: return "moments";
    case Suite::spectrum: return "spectrum";
    case Suite::converge: return "converge";
    }
    return "";
}

inline Suite parse_suite(const std::string& s) {
    if (s == "verify") return Suite::verify;
    if (s == "moments") return Suite::moments;
    if (s == "spectrum") return Suite::spectrum;
    if (s == "converge") return Suite::converge;
    throw ConfigError("unknown suite '" + s + "'");
}

struct Tolerances {
    double exact = 1e-12;   ///< exact algebra (braid relations, recursion)
    double adjoint = 1e-10; ///< paths through one Gram inverse
    double norm = 1e-9;     ///< norm bounds and moment oracles
};

struct RunConfig {
    std::string source; ///< config path or "preset:<name>"
    Grid grid{Matrix::Constant(1, 1, 0.5), 1.0};
    KernelSpec kernel = ConstantKernelSpec{0.0};
    int n_max = 3;
    int d = 1;
    int n = 4;
    int refinements = 3;
    std::vector<std::string> functions; ///< empty: suite default
    std::uint64_t seed = 0;
    Format format = Format::json;
    Tolerances tol;
};

namespace detail {

using json = nlohmann::json;

[[noreturn]] inline void fail(const std::string& path, const std::string& what) {
    throw ValidationError(path + ": " + what);
}

inline const json& field(const json& obj, const std::string& key, const std::string& path) {
    if (!obj.is_object()) fail(path, "expected an object");
    auto it = obj.find(key);
    if (it == obj.end()) fail(path + "." + key, "missing");
    return *it;
}

inline double number(const json& v, const std::string& path) {
    if (!v.is_number()) fail(path, "expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) fail(path, "not finite");
    return x;
}

inline int integer(const json& v, const std::string& path) {
    if (!v.is_number_integer()) fail(path, "expected an integer");
    return v.get<int>();
}

inline std::string string(const json& v, const std::string& path) {
    if (!v.is_string()) fail(path, "expected a string");
    return v.get<std::string>();
}

inline Matrix matrix(const json& v, const std::string& path) {
    if (!v.is_array() || v.empty()) fail(path, "expected a non-empty array of rows");
    const auto rows = static_cast<Eigen::Index>(v.size());
    if (!v[0].is_array() || v[0].empty()) fail(path + "[0]", "expected a non-empty array");
    const auto cols = static_cast<Eigen::Index>(v[0].size());
    Matrix M(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
        const std::string rp = path + "[" + std::to_string(r) + "]";
        const auto& row = v[static_cast<std::size_t>(r)];
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols)
            fail(rp, "expected " + std::to_string(cols) + " entries");
        for (Eigen::Index c = 0; c < cols; ++c)
            M(r, c) = number(row[static_cast<std::size_t>(c)], rp + "[" + std::to_string(c) + "]");
    }
    return M;
}

inline Grid parse_grid(const json& g) {
    const std::string type = string(field(g, "type", "$.grid"), "$.grid.type");
    try {
        if (type == "interval1d") {
            const int m = integer(field(g, "m", "$.grid"), "$.grid.m");
            if (m < 1) fail("$.grid.m", "must be >= 1");
            return make_grid_1d(number(field(g, "a", "$.grid"), "$.grid.a"),
                                number(field(g, "b", "$.grid"), "$.grid.b"), m);
        }
        if (type == "points") {
            const Matrix pts = matrix(field(g, "points", "$.grid"), "$.grid.points");
            if (g.contains("j") && integer(g["j"], "$.grid.j") != pts.cols())
                fail("$.grid.j", "does not match the point dimension " + std::to_string(pts.cols()));
            return Grid(pts, number(field(g, "eps", "$.grid"), "$.grid.eps"));
        }
    } catch (const ValidationError&) {
        throw;
    } catch (const ConfigError& e) {
        fail("$.grid", e.what());
    }
    fail("$.grid.type", "unknown grid type '" + type + "'");
}

inline KernelSpec parse_kernel(const json& k) {
    const std::string type = string(field(k, "type", "$.kernel"), "$.kernel.type");
    if (type == "constant") return ConstantKernelSpec{number(field(k, "q", "$.kernel"), "$.kernel.q")};
    if (type == "gaussian")
        return GaussianKernelSpec{number(field(k, "q0", "$.kernel"), "$.kernel.q0"),
                                  number(field(k, "length", "$.kernel"), "$.kernel.length")};
    if (type == "matrix") return MatrixKernelSpec{matrix(field(k, "values", "$.kernel"), "$.kernel.values")};
    fail("$.kernel.type", "unknown kernel type '" + type + "'");
}

inline const char* kernel_path(const KernelSpec& spec) {
    if (std::holds_alternative<ConstantKernelSpec>(spec)) return "$.kernel.q";
    if (std::holds_alternative<GaussianKernelSpec>(spec)) return "$.kernel";
    return "$.kernel.values";
}

inline void parse_run(const json& r, RunConfig& cfg) {
    if (!r.is_object()) fail("$.run", "expected an object");
    if (r.contains("n_max")) cfg.n_max = integer(r["n_max"], "$.run.n_max");
    if (r.contains("d")) cfg.d = integer(r["d"], "$.run.d");
    if (r.contains("n")) cfg.n = integer(r["n"], "$.run.n");
    if (r.contains("refinements")) cfg.refinements = integer(r["refinements"], "$.run.refinements");
    if (r.contains("seed")) {
        if (!r["seed"].is_number_unsigned()) fail("$.run.seed", "expected a non-negative integer");
        cfg.seed = r["seed"].get<std::uint64_t>();
    }
    if (r.contains("functions")) {
        const auto& fs = r["functions"];
        if (!fs.is_array()) fail("$.run.functions", "expected an array of names");
        for (std::size_t i = 0; i < fs.size(); ++i)
            cfg.functions.push_back(string(fs[i], "$.run.functions[" + std::to_string(i) + "]"));
    }
    if (r.contains("tolerances")) {
        const auto& t = r["tolerances"];
        if (!t.is_object()) fail("$.run.tolerances", "expected an object");
        for (auto [key, ptr] : {std::pair{"exact", &cfg.tol.exact}, std::pair{"adjoint", &cfg.tol.adjoint},
                                std::pair{"norm", &cfg.tol.norm}})
            if (t.contains(key)) {
                const std::string p = std::string("$.run.tolerances.") + key;
                *ptr = number(t[key], p);
                if (!(*ptr > 0.0)) fail(p, "must be positive");
            }
    }
}

} // namespace detail

/// Checks ranges that do not depend on the suite.
inline void validate(const RunConfig& cfg) {
    if (cfg.n_max < 1 || cfg.n_max > 8) detail::fail("$.run.n_max", "must be in 1..8");
    if (cfg.d < 1) detail::fail("$.run.d", "must be >= 1");
    if (cfg.n < 0 || cfg.n > kPairingCap) detail::fail("$.run.n", "must be in 0.." + std::to_string(kPairingCap));
    if (cfg.refinements < 0 || cfg.refinements > 5) detail::fail("$.run.refinements", "must be in 0..5");
    try {
        (void)sample_kernel(cfg.kernel, cfg.grid);
    } catch (const ValidationError& e) {
        detail::fail(detail::kernel_path(cfg.kernel), e.what());
    } catch (const ConfigError& e) {
        detail::fail(detail::kernel_path(cfg.kernel), e.what());
    } catch (const DimensionError& e) {
        detail::fail("$.kernel.values", e.what());
    }
}

inline RunConfig parse_config(const std::string& text, std::string source = "<string>") {
    detail::json j;
    try {
        j = detail::json::parse(text);
    } catch (const detail::json::parse_error& e) {
        throw ConfigError(std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object()) detail::fail("$", "expected an object");
    RunConfig cfg;
    cfg.source = std::move(source);
    cfg.grid = detail::parse_grid(detail::field(j, "grid", "$"));
    cfg.kernel = detail::parse_kernel(detail::field(j, "kernel", "$"));
    if (j.contains("run")) detail::parse_run(j["run"], cfg);
    validate(cfg);
    return cfg;
}

inline RunConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), path);
}

inline const std::vector<std::string>& preset_names() {
    static const std::vector<std::string> names{"free-small", "constant-small", "gaussian-small", "krolak-binding"};
    return names;
}

inline RunConfig preset(const std::string& name) {
    RunConfig cfg;
    cfg.source = "preset:" + name;
    if (name == "free-small") {
        cfg.grid = make_grid_1d(0, 1, 2);
        cfg.kernel = ConstantKernelSpec{0.0};
        cfg.n_max = 3;
    } else if (name == "constant-small") {
        cfg.grid = make_grid_1d(0, 1, 3);
        cfg.kernel = ConstantKernelSpec{0.3};
        cfg.n_max = 3;
    } else if (name == "gaussian-small") {
        cfg.grid = make_grid_1d(0, 1, 8);
        cfg.kernel = GaussianKernelSpec{0.5, 0.2};
        cfg.n_max = 3;
        cfg.d = 2;
        cfg.refinements = 2;
    } else if (name == "krolak-binding") {
        cfg.grid = make_grid_1d(0, 1, 50);
        cfg.kernel = ConstantKernelSpec{0.0};
        cfg.n_max = 3;
        cfg.d = 50;
    } else {
        throw ConfigError("unknown preset '" + name + "'");
    }
    validate(cfg);
    return cfg;
}

} // namespace qfock
