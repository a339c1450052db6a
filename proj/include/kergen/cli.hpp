#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "kergen/group.hpp"
#include "kergen/homsearch.hpp"

// Job runner behind the command-line tool.
namespace kergen::cli {

using json = nlohmann::json;

inline constexpr const char* kSchemaVersion = "kergen-report/1";

struct GlobalOptions {
  unsigned jobs = 1;
  std::uint64_t budget_prefixes = kDefaultPrefixBudget;
  std::size_t cap_order = kDefaultClosureCap;
};

enum ExitCode : int { kExitOk = 0, kExitFail = 1, kExitBudget = 2, kExitError = 3, kExitUsage = 64 };

// Builtin reference string, inline document object, or "@path" to a document file.
GroupPtr resolve_group(const json& ref, std::size_t cap);
// {"kind": "permutation" | "matrix" | "residue", "modulus": m, "degree": d, "generators": [...]}
GroupPtr group_from_document(const json& doc, std::size_t cap);

const std::vector<std::string>& known_commands();

// One report; per-job failures are recorded in the report, never thrown.
json run_job(const json& job, const GlobalOptions& opts, std::size_t index = 0);

// Accepts {"jobs": [...]} or a bare array. Throws InvalidInput on a malformed manifest.
std::vector<json> parse_manifest(const json& manifest);
std::vector<json> run_jobs(const std::vector<json>& jobs, const GlobalOptions& opts);

// FAIL beats BUDGET beats ERROR; all OK/PASS gives 0.
int exit_code(const std::vector<json>& reports);

int main_entry(int argc, char** argv);

}  // namespace kergen::cli
