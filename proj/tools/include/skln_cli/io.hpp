#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>

#include "json.hpp"

#include "skln/problem.hpp"
#include "skln/profile.hpp"
#include "skln/verification.hpp"

namespace skln::cli {

/// Malformed input file. Maps to exit code 2.
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// File could not be opened, read or written. Maps to exit code 4.
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline constexpr const char* kProfileHeader = "t,r,xi,xi_p,u,dlnu_dr,branch";

/// Shortest text that is guaranteed to round-trip: 17 significant digits.
std::string format_number(double v);

void write_profile_csv(std::ostream& out, const CylinderProfile& profile, const ProblemSpec& spec);

struct ProfileColumns {
    std::vector<double> t, xi, xi_p;
    std::vector<Branch> branch;
};

/// Parses the CSV written by write_profile_csv. Throws ParseError naming the
/// first offending line.
ProfileColumns read_profile_csv(std::istream& in);

nlohmann::json to_json(const Regime& regime);
nlohmann::json to_json(const VerificationReport& report);

std::string read_file(const std::string& path);
/// Truncates and writes path; throws IoError on failure.
void write_file(const std::string& path, const std::string& content);

}  // namespace skln::cli
