#include "skln_cli/io.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "skln/cylinder.hpp"

namespace skln::cli {

namespace {

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ',')) out.push_back(field);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

double parse_number(const std::string& field, std::size_t line_no, const char* column) {
    const char* begin = field.c_str();
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(begin, &end);
    if (field.empty() || end != begin + field.size() || errno == ERANGE || !std::isfinite(v)) {
        throw ParseError("line " + std::to_string(line_no) + ": column " + column +
                         " is not a finite number: '" + field + "'");
    }
    return v;
}

nlohmann::json optional_number(const std::optional<double>& v) {
    return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

}  // namespace

std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_profile_csv(std::ostream& out, const CylinderProfile& profile, const ProblemSpec& spec) {
    out << kProfileHeader << '\n';
    const int n = profile.n();
    for (std::size_t i = 0; i < profile.size(); ++i) {
        const double t = profile.t()[i];
        const double xi = profile.xi()[i];
        const double xp = profile.xi_p()[i];
        const RadialPoint rp = from_cylinder(t, xi, spec);
        out << format_number(t) << ',' << format_number(rp.r) << ',' << format_number(xi) << ','
            << format_number(xp) << ',' << format_number(rp.u) << ','
            << format_number(dlnu_dr_from_slope(xp, rp.r, n)) << ','
            << static_cast<char>(profile.branch()[i]) << '\n';
    }
}

ProfileColumns read_profile_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) {
        throw ParseError("line 1: empty profile file");
    }
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kProfileHeader) {
        throw ParseError(std::string("line 1: expected header '") + kProfileHeader + "'");
    }
    ProfileColumns cols;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto f = split(line);
        if (f.size() != 7) {
            throw ParseError("line " + std::to_string(line_no) + ": expected 7 fields, found " +
                             std::to_string(f.size()));
        }
        cols.t.push_back(parse_number(f[0], line_no, "t"));
        parse_number(f[1], line_no, "r");
        cols.xi.push_back(parse_number(f[2], line_no, "xi"));
        cols.xi_p.push_back(parse_number(f[3], line_no, "xi_p"));
        parse_number(f[4], line_no, "u");
        parse_number(f[5], line_no, "dlnu_dr");
        if (f[6] == "S") {
            cols.branch.push_back(Branch::Single);
        } else if (f[6] == "L") {
            cols.branch.push_back(Branch::Left);
        } else if (f[6] == "R") {
            cols.branch.push_back(Branch::Right);
        } else {
            throw ParseError("line " + std::to_string(line_no) + ": branch must be S, L or R");
        }
    }
    if (cols.t.size() < 2) {
        throw ParseError("line " + std::to_string(line_no) + ": profile needs at least two rows");
    }
    return cols;
}

nlohmann::json to_json(const Regime& r) {
    nlohmann::json j;
    j["tag"] = std::string(to_string(r.tag));
    j["H"] = r.H;
    j["t_m"] = optional_number(r.t_m);
    j["p"] = optional_number(r.p);
    j["q_a"] = optional_number(r.q_a);
    j["T_bc"] = optional_number(r.T_bc);
    j["borderline"] = r.borderline;
    j["inverted"] = r.inverted;
    return j;
}

nlohmann::json to_json(const VerificationReport& rep) {
    nlohmann::json j;
    j["regime"] = std::string(to_string(rep.regime));
    j["passed"] = rep.passed;
    j["pde_residual_max"] = rep.pde_residual_max;
    j["pde_residual_rel"] = rep.pde_residual_rel;
    j["H_reference"] = rep.H_reference;
    j["H_drift"] = rep.H_drift;
    j["cone_ok"] = rep.cone_ok;
    j["slope_consistency"] = rep.slope_consistency;
    j["holder_exponent_fit"] = optional_number(rep.holder_exponent_fit);
    j["holder_exponent_stderr"] = optional_number(rep.holder_exponent_stderr);
    j["jump_left"] = optional_number(rep.jump_left);
    j["jump_right"] = optional_number(rep.jump_right);
    j["boundary_slope_fit"] = optional_number(rep.boundary_slope_fit);
    j["boundary_coefficient"] = optional_number(rep.boundary_coefficient);
    if (rep.certificate) {
        const auto& c = *rep.certificate;
        j["certificate"] = {{"applicable", c.applicable}, {"passed", c.passed},
                            {"detail", c.detail},         {"m", c.m},
                            {"dlnu_left", c.dlnu_left},   {"dlnu_right", c.dlnu_right},
                            {"gap", c.gap},               {"image_lo", c.image_lo},
                            {"image_hi", c.image_hi}};
    } else {
        j["certificate"] = nullptr;
    }
    nlohmann::json checks = nlohmann::json::array();
    for (const auto& c : rep.checks) {
        checks.push_back({{"name", c.name},
                          {"enabled", c.enabled},
                          {"passed", c.passed},
                          {"value", std::isfinite(c.value) ? nlohmann::json(c.value) : nlohmann::json(nullptr)},
                          {"threshold", c.threshold},
                          {"detail", c.detail}});
    }
    j["checks"] = checks;
    return j;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open '" + path + "' for reading");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) {
        throw IoError("error while reading '" + path + "'");
    }
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot open '" + path + "' for writing");
    }
    out << content;
    out.flush();
    if (!out) {
        throw IoError("error while writing '" + path + "'");
    }
}

}  // namespace skln::cli
