#pragma once

// The design report: every computed claim with its target, tolerance and
// verdict, in a deterministic order and number format.

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "atomchip/scenario.hpp"

namespace atomchip::report {

inline constexpr std::string_view kReportSchema = "atomchip.report/1";

enum class Status { pass, fail, advisory };
enum class Provenance { paper_quoted, derived };

std::string_view to_string(Status s);
std::string_view to_string(Provenance p);

struct ClaimRow {
  std::string id;
  std::string description;
  std::optional<double> value;
  std::string unit;
  std::optional<double> paper_value;  // target in the same unit, when one is quoted
  std::string tolerance;              // the check applied, in words
  Status status = Status::pass;
  Provenance provenance = Provenance::derived;
  std::string reference;  // what the target is and where it comes from; never empty
  std::string note;
};

struct DesignReport {
  std::vector<ClaimRow> rows;  // sorted by id

  std::size_t count(Status s) const;
  bool passed() const { return count(Status::fail) == 0; }
  /// Throws std::out_of_range for an unknown id.
  const ClaimRow& row(std::string_view id) const;
};

/// A pipeline stage rejected its input; names the claim it blocked.
class ReportError : public std::runtime_error {
 public:
  ReportError(std::string claim, std::string stage, const std::string& message);
  const std::string& claim() const noexcept { return claim_; }
  const std::string& stage() const noexcept { return stage_; }

 private:
  std::string claim_;
  std::string stage_;
};

struct ReportOptions {
  std::vector<std::string> claims;  // empty: all; otherwise only these are computed
};

/// Every claim identifier, sorted.
std::vector<std::string> claim_ids();

/// Runs the cloud, trap, loading, detection, Rydberg, gate and budget stages
/// needed by the requested claims. Stages are computed once and shared.
DesignReport assemble_report(const scenario::ScenarioConfig& config,
                             const ReportOptions& options = {});

/// Nine significant digits, "%.9g".
std::string format_number(double v);

std::string to_text(const DesignReport& r);
std::string to_json(const DesignReport& r);
std::string to_csv(const DesignReport& r);

}  // namespace atomchip::report
