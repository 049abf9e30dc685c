#include "llf/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <sstream>

#include "llf/csv.hpp"
#include "llf/errors.hpp"
#include "llf/interp.hpp"

namespace llf::cfg {

namespace {

std::string trim(const std::string& s) {
    auto a = s.find_first_not_of(" \t\r");
    auto b = s.find_last_not_of(" \t\r");
    if (a == std::string::npos) return "";
    return s.substr(a, b - a + 1);
}

struct Entry {
    enum class Type { Double, Size, Bool, String, Unsigned } type;
    void* ptr;
};

std::map<std::string, Entry> schema(RunConfig& c) {
    using T = Entry::Type;
    return {
        {"metric.kind", {T::String, &c.metric_kind}},
        {"metric.table", {T::String, &c.metric_table}},
        {"grid.r_lo", {T::Double, &c.grid_r_lo}},
        {"grid.r_hi", {T::Double, &c.grid_r_hi}},
        {"grid.n", {T::Size, &c.grid_n}},
        {"profile.b_list", {T::String, &c.profile_b_list}},
        {"profile.eta", {T::Double, &c.profile_eta}},
        {"radiation.b_list", {T::String, &c.radiation_b_list}},
        {"radiation.eta", {T::Double, &c.radiation_eta}},
        {"evolution.lambda0", {T::Double, &c.lambda0}},
        {"evolution.r0", {T::Double, &c.r0}},
        {"evolution.gamma0", {T::Double, &c.gamma0}},
        {"evolution.b0", {T::Double, &c.b0}},
        {"evolution.alpha_star", {T::Double, &c.alpha_star}},
        {"evolution.strict_loglog", {T::Bool, &c.strict_loglog}},
        {"evolution.eps0_kind", {T::String, &c.eps0_kind}},
        {"evolution.eps0_width", {T::Double, &c.eps0_width}},
        {"evolution.eps0_amplitude", {T::Double, &c.eps0_amplitude}},
        {"evolution.c_dt", {T::Double, &c.c_dt}},
        {"evolution.dt_max", {T::Double, &c.dt_max}},
        {"evolution.max_time", {T::Double, &c.max_time}},
        {"evolution.record_every", {T::Size, &c.record_every}},
        {"evolution.snapshot_every", {T::Size, &c.snapshot_every}},
        {"evolution.track_modulation", {T::Bool, &c.track_modulation}},
        {"evolution.lambda_floor_cells", {T::Double, &c.lambda_floor_cells}},
        {"evolution.grad_ceiling", {T::Double, &c.grad_ceiling}},
        {"evolution.sign", {T::Double, &c.sign}},
        {"evolution.family_b_min", {T::Double, &c.family_b_min}},
        {"evolution.family_b_max", {T::Double, &c.family_b_max}},
        {"evolution.family_db", {T::Double, &c.family_db}},
        {"diagnostics.a_param", {T::Double, &c.a_param}},
        {"diagnostics.delta", {T::Double, &c.delta}},
        {"diagnostics.slack_lo", {T::Double, &c.slack_lo}},
        {"diagnostics.slack_hi", {T::Double, &c.slack_hi}},
        {"output.dir", {T::String, &c.out_dir}},
        {"output.seed", {T::Unsigned, &c.seed}},
        {"output.binary_snapshots", {T::Bool, &c.binary_snapshots}},
    };
}

const char* kSectionOrder[] = {"metric",    "grid",        "profile", "radiation",
                               "evolution", "diagnostics", "output"};

} // namespace

RunConfig parse(const std::string& text) {
    RunConfig c;
    auto sch = schema(c);
    std::istringstream in(text);
    std::string line, section;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            require(line.back() == ']', "config-error",
                    "malformed section header at line " + std::to_string(lineno));
            section = trim(line.substr(1, line.size() - 2));
            bool known = false;
            for (const char* s : kSectionOrder) known = known || section == s;
            require(known, "config-error", "unknown section [" + section + "]");
            continue;
        }
        auto eq = line.find('=');
        require(eq != std::string::npos, "config-error",
                "expected key = value at line " + std::to_string(lineno));
        std::string key = section + "." + trim(line.substr(0, eq));
        std::string val = trim(line.substr(eq + 1));
        auto it = sch.find(key);
        require(it != sch.end(), "config-error", "unknown key '" + key + "'");
        switch (it->second.type) {
        case Entry::Type::Double:
            *static_cast<double*>(it->second.ptr) = std::strtod(val.c_str(), nullptr);
            if (val == "nan") *static_cast<double*>(it->second.ptr) = std::nan("");
            break;
        case Entry::Type::Size:
            *static_cast<std::size_t*>(it->second.ptr) =
                static_cast<std::size_t>(std::strtoull(val.c_str(), nullptr, 10));
            break;
        case Entry::Type::Unsigned:
            *static_cast<unsigned*>(it->second.ptr) =
                static_cast<unsigned>(std::strtoul(val.c_str(), nullptr, 10));
            break;
        case Entry::Type::Bool:
            require(val == "true" || val == "false", "config-error",
                    "boolean key '" + key + "' wants true/false");
            *static_cast<bool*>(it->second.ptr) = val == "true";
            break;
        case Entry::Type::String:
            *static_cast<std::string*>(it->second.ptr) = val;
            break;
        }
    }
    return c;
}

std::string serialize(const RunConfig& c0) {
    RunConfig c = c0;
    auto sch = schema(c);
    std::string out;
    for (const char* sec : kSectionOrder) {
        out += "[";
        out += sec;
        out += "]\n";
        for (auto& [key, e] : sch) {
            auto dot = key.find('.');
            if (key.substr(0, dot) != sec) continue;
            out += key.substr(dot + 1);
            out += " = ";
            switch (e.type) {
            case Entry::Type::Double: {
                double v = *static_cast<double*>(e.ptr);
                out += std::isnan(v) ? "nan" : CsvWriter::format(v);
                break;
            }
            case Entry::Type::Size:
                out += std::to_string(*static_cast<std::size_t*>(e.ptr));
                break;
            case Entry::Type::Unsigned:
                out += std::to_string(*static_cast<unsigned*>(e.ptr));
                break;
            case Entry::Type::Bool:
                out += *static_cast<bool*>(e.ptr) ? "true" : "false";
                break;
            case Entry::Type::String:
                out += *static_cast<std::string*>(e.ptr);
                break;
            }
            out += "\n";
        }
    }
    return out;
}

RunConfig load_file(const std::string& path) {
    std::ifstream in(path);
    require(in.good(), "config-error", "cannot open config " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
}

std::vector<double> parse_list(const std::string& csv) {
    std::vector<double> out;
    std::istringstream in(csv);
    std::string tok;
    while (std::getline(in, tok, ',')) {
        tok = trim(tok);
        if (!tok.empty()) out.push_back(std::strtod(tok.c_str(), nullptr));
    }
    return out;
}

geom::SurfaceMetric metric_from(const RunConfig& c) {
    if (c.metric_kind == "euclidean-plane")
        return geom::make_metric(geom::MetricKind::EuclideanPlane);
    if (c.metric_kind == "round-sphere")
        return geom::make_metric(geom::MetricKind::RoundSphere);
    if (c.metric_kind == "hyperbolic-plane")
        return geom::make_metric(geom::MetricKind::HyperbolicPlane);
    if (c.metric_kind == "s2-normalized") {
        // compact sphere-like metric with h(1) = 1 exactly
        const double beta = (1.0 - std::sin(1.0)) / std::pow(std::sin(1.0), 3.0);
        auto h = [beta](double r) {
            double s = std::sin(r);
            return s + beta * s * s * s;
        };
        auto hp = [beta](double r) {
            double s = std::sin(r);
            return std::cos(r) * (1.0 + 3.0 * beta * s * s);
        };
        return geom::make_metric(geom::MetricKind::Custom, h, hp, M_PI);
    }
    if (c.metric_kind == "table") {
        require(!c.metric_table.empty(), "config-error",
                "metric.kind = table requires metric.table = <csv path>");
        std::ifstream in(c.metric_table);
        require(in.good(), "config-error", "cannot open metric table " + c.metric_table);
        std::string line;
        std::getline(in, line); // header r,h,h_prime
        auto rs = std::make_shared<std::vector<double>>();
        auto hs = std::make_shared<std::vector<double>>();
        auto hps = std::make_shared<std::vector<double>>();
        while (std::getline(in, line)) {
            if (trim(line).empty()) continue;
            auto vals = parse_list(line);
            require(vals.size() == 3, "config-error", "metric table wants r,h,h_prime rows");
            rs->push_back(vals[0]);
            hs->push_back(vals[1]);
            hps->push_back(vals[2]);
        }
        require(rs->size() >= 8, "config-error", "metric table needs >= 8 samples");
        double d0 = (*rs)[1] - (*rs)[0];
        for (std::size_t i = 1; i < rs->size(); ++i)
            require(std::fabs((*rs)[i] - (*rs)[i - 1] - d0) < 1e-6 * std::fabs(d0),
                    "config-error", "metric table must be uniformly spaced in r");
        double r0 = rs->front(), r1 = rs->back();
        auto h = [=](double r) {
            double rr = std::min(std::max(r, r0), r1);
            return interp_uniform(*hs, r0, d0, rr);
        };
        auto hp = [=](double r) {
            double rr = std::min(std::max(r, r0), r1);
            return interp_uniform(*hps, r0, d0, rr);
        };
        // compact surface iff the warp closes at the far end of the table
        double hmax = *std::max_element(hs->begin(), hs->end());
        double rho = hs->back() < 1e-6 * hmax ? r1
                                              : std::numeric_limits<double>::infinity();
        return geom::make_metric(geom::MetricKind::Custom, h, hp, rho);
    }
    throw Error("config-error", "unknown metric kind '" + c.metric_kind + "'");
}

void write_snapshot_bin(const std::string& path, const geom::RadialField& u) {
    std::ofstream out(path, std::ios::binary);
    require(out.good(), "io-error", "cannot open " + path);
    out.write("RNLS", 4);
    std::uint32_t version = 1;
    std::uint64_t n = u.grid.n;
    out.write(reinterpret_cast<const char*>(&version), 4);
    out.write(reinterpret_cast<const char*>(&n), 8);
    std::vector<double> col(u.grid.n);
    for (std::size_t i = 0; i < u.grid.n; ++i) col[i] = u.grid.node(i);
    out.write(reinterpret_cast<const char*>(col.data()), static_cast<std::streamsize>(8 * col.size()));
    for (std::size_t i = 0; i < u.grid.n; ++i) col[i] = u.values[i].real();
    out.write(reinterpret_cast<const char*>(col.data()), static_cast<std::streamsize>(8 * col.size()));
    for (std::size_t i = 0; i < u.grid.n; ++i) col[i] = u.values[i].imag();
    out.write(reinterpret_cast<const char*>(col.data()), static_cast<std::streamsize>(8 * col.size()));
    require(out.good(), "io-error", "write failed for " + path);
}

geom::RadialField read_snapshot_bin(const std::string& path, const geom::SurfaceMetric& m) {
    std::ifstream in(path, std::ios::binary);
    require(in.good(), "io-error", "cannot open " + path);
    char magic[4];
    in.read(magic, 4);
    require(std::memcmp(magic, "RNLS", 4) == 0, "io-error", "bad snapshot magic");
    std::uint32_t version = 0;
    std::uint64_t n = 0;
    in.read(reinterpret_cast<char*>(&version), 4);
    in.read(reinterpret_cast<char*>(&n), 8);
    require(version == 1, "io-error", "unsupported snapshot version");
    std::vector<double> r(n), re(n), im(n);
    in.read(reinterpret_cast<char*>(r.data()), static_cast<std::streamsize>(8 * n));
    in.read(reinterpret_cast<char*>(re.data()), static_cast<std::streamsize>(8 * n));
    in.read(reinterpret_cast<char*>(im.data()), static_cast<std::streamsize>(8 * n));
    require(in.good(), "io-error", "truncated snapshot");
    double dr = r[1] - r[0];
    geom::RadialGrid g = geom::make_grid(m, r.front() - 0.5 * dr, r.back() + 0.5 * dr, n);
    std::vector<geom::cplx> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = {re[i], im[i]};
    return geom::make_field(g, v);
}

void write_snapshot_csv(const std::string& path, double t, const geom::RadialField& u) {
    CsvWriter w({"t", "r", "Re u", "Im u"});
    for (std::size_t i = 0; i < u.grid.n; ++i)
        w.row({t, u.grid.node(i), u.values[i].real(), u.values[i].imag()});
    w.write_file(path);
}

} // namespace llf::cfg
