#ifndef RUNLONG_CLI_HPP
#define RUNLONG_CLI_HPP

#include "runlong/oracle.hpp"
#include "runlong/stats.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace runlong::cli {

enum class Command { count, pmf, cdf, moments, pvalue, verify, table };
enum class Format { json, csv, tsv, plot };

/// One fully parsed command-line request. run() validates the parts the
/// parser cannot (arities, ranges) and reports violations as structured
/// error records.
struct JobConfig {
    Command command = Command::count;
    std::vector<int> counts;
    Definition definition = Definition::whole_system;
    std::vector<int> m_vec; // empty means "default": zeros of the right arity
    std::vector<int> q_vec; // empty means "not given"
    Rational alpha = Rational(1, 20);
    Format format = Format::json;
    int digits = 6;
    std::optional<std::uint64_t> seed;

    std::string stat;    // count: one of N, L, W, Z, Q, T
    int run_count = -1;  // count --stat T: required total run count
    int letter = 1;      // pvalue / count --stat Z: 1-based target letter
    int m_max = 3;       // table
    int max_total = 8;   // verify
    int max_k = 3;       // verify
    long cap = kDefaultEnumerationCap;
    std::string out_path; // empty: write to `out`
};

/// Executes a request, writing the data document to `out` (or --out FILE) and
/// a one-line diagnostic to `err` on failure. Returns the exit status:
/// 0 success, 1 verify found a failing identity, 2 invalid request,
/// 3 enumeration cap exceeded. Failures emit a JSON error record
/// {"error": {"code", "message"}} on `out` regardless of --format.
int run(const JobConfig& config, std::ostream& out, std::ostream& err);

/// Parses argv-style arguments (program name excluded) and runs them.
int run_args(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace runlong::cli

#endif
