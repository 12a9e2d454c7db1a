#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "scan.hpp"
#include "version.hpp"

namespace spinent {

using Json = nlohmann::json;

struct RunConfig {
    LatticeKind kind = LatticeKind::Chain;
    int length = 8;
    ModelParams model;
    std::vector<double> grid;       // empty if not given
    double bracket_lo = 0.0, bracket_hi = 0.0;
    bool has_bracket = false;
    std::optional<double> h_f;      // detector mask anchor, optional override
    double mask_radius = 0.04;
    SolverOptions solver;
    CkwBasis ckw_basis = CkwBasis::Broken;
    std::string out_dir = ".";
    bool emit_plots = false;
};

inline RunConfig parse_config(const Json& j) {
    RunConfig c;
    if (j.contains("lattice")) {
        const auto& l = j.at("lattice");
        std::string kind = l.value("kind", "chain");
        if (kind == "chain") c.kind = LatticeKind::Chain;
        else if (kind == "ladder") c.kind = LatticeKind::Ladder;
        else throw std::invalid_argument("config: lattice.kind must be chain or ladder");
        c.length = l.value("length", 8);
    }
    if (j.contains("model")) {
        const auto& m = j.at("model");
        c.model.delta_y = m.value("delta_y", 1.0);
        c.model.delta_z = m.value("delta_z", 1.0);
        std::string frame = m.value("frame", "original");
        if (frame == "original") c.model.frame = Frame::Original;
        else if (frame == "rotated") c.model.frame = Frame::Rotated;
        else throw std::invalid_argument("config: model.frame must be original or rotated");
    }
    if (j.contains("grid")) {
        const auto& g = j.at("grid");
        if (g.contains("values")) {
            c.grid = g.at("values").get<std::vector<double>>();
        } else {
            double start = g.at("start"), stop = g.at("stop"), step = g.at("step");
            if (step <= 0.0) throw std::invalid_argument("config: grid.step must be > 0");
            if (stop < start) throw std::invalid_argument("config: grid.stop < grid.start");
            for (double h = start; h <= stop + 1e-12; h += step) c.grid.push_back(h);
        }
    }
    if (j.contains("bracket")) {
        auto b = j.at("bracket").get<std::vector<double>>();
        if (b.size() != 2 || !(b[1] > b[0]))
            throw std::invalid_argument("config: bracket must be [lo, hi] with hi > lo");
        c.bracket_lo = b[0];
        c.bracket_hi = b[1];
        c.has_bracket = true;
    }
    if (j.contains("h_f")) c.h_f = j.at("h_f").get<double>();
    c.mask_radius = j.value("mask_radius", 0.04);
    if (j.contains("solver")) {
        const auto& s = j.at("solver");
        c.solver.tol = s.value("tol", 1e-11);
        c.solver.max_iter = s.value("max_iter", 600);
        c.solver.seed = s.value("seed", std::uint64_t(12345));
    }
    std::string basis = j.value("ckw_tau1", "broken");
    if (basis == "broken") c.ckw_basis = CkwBasis::Broken;
    else if (basis == "sym") c.ckw_basis = CkwBasis::Sym;
    else throw std::invalid_argument("config: ckw_tau1 must be broken or sym");
    if (j.contains("output")) {
        const auto& o = j.at("output");
        c.out_dir = o.value("dir", ".");
        c.emit_plots = o.value("emit_plots", false);
    }
    return c;
}

inline RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file: " + path);
    Json j = Json::parse(in);
    return parse_config(j);
}

inline Json config_echo(const RunConfig& c) {
    Json j;
    j["lattice"] = {{"kind", c.kind == LatticeKind::Chain ? "chain" : "ladder"},
                    {"length", c.length}};
    j["model"] = {{"delta_y", c.model.delta_y},
                  {"delta_z", c.model.delta_z},
                  {"frame", c.model.frame == Frame::Original ? "original" : "rotated"}};
    if (!c.grid.empty()) j["grid"]["values"] = c.grid;
    if (c.has_bracket) j["bracket"] = {c.bracket_lo, c.bracket_hi};
    if (c.h_f) j["h_f"] = *c.h_f;
    j["mask_radius"] = c.mask_radius;
    j["solver"] = {{"tol", c.solver.tol},
                   {"max_iter", c.solver.max_iter},
                   {"seed", c.solver.seed}};
    j["ckw_tau1"] = c.ckw_basis == CkwBasis::Broken ? "broken" : "sym";
    j["output"] = {{"dir", c.out_dir}, {"emit_plots", c.emit_plots}};
    j["version"] = kVersion;
    return j;
}

// 17 significant digits, empty string for absent values
inline std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

inline std::string fmt17(const std::optional<double>& x) {
    return x ? fmt17(*x) : std::string();
}

inline std::string rows_to_csv(const std::vector<SweepRow>& rows,
                               const std::vector<PairClass>& classes) {
    std::ostringstream os;
    os << "h,energy,gap,mz,mx_lr,tau1_sym,tau1_broken,tau2,ratio,ckw,xi";
    for (const auto& pc : classes)
        os << ",C1_" << pc.label << ",C2_" << pc.label << ",C_" << pc.label;
    os << "\n";
    for (const auto& r : rows) {
        std::vector<std::string> fields;
        fields.push_back(fmt17(r.h));
        if (r.converged) {
            for (double x : {r.energy, r.gap, r.mz, r.mx_lr, r.tau1_sym, r.tau1_broken,
                             r.tau2})
                fields.push_back(fmt17(x));
            fields.push_back(fmt17(r.ratio));
            fields.push_back(r.ckw_ok ? "1" : "0");
            fields.push_back(fmt17(r.xi));
            for (const auto& t : r.concurrences) {
                fields.push_back(fmt17(t.c1));
                fields.push_back(fmt17(t.c2));
                fields.push_back(fmt17(t.c));
            }
        } else {  // solver failure: empty fields mark the row
            fields.resize(11 + 3 * classes.size());
        }
        for (size_t q = 0; q < fields.size(); ++q) os << (q ? "," : "") << fields[q];
        os << "\n";
    }
    return os.str();
}

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out << content;
    if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace spinent
