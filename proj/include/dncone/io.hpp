#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "dncone/dn_cone.hpp"
#include "dncone/matrix.hpp"
#include "dncone/prober.hpp"
#include "dncone/scalar_calculus.hpp"

namespace dncone {

// Matrix wire format: {"n": N, "rows": [[...], ...]}, row-major, every
// number printed with 17 significant digits so parsing returns the same
// doubles bit for bit.
std::string serialize_matrix(const SymMatrix& a);

// Throws ParseError (with line and column of the offending byte) for
// malformed documents and SymmetryError when some |a_ij - a_ji| exceeds
// 1e-12 * max|a|. Smaller asymmetries are averaged away and a message is
// appended to *warnings.
SymMatrix parse_matrix(std::string_view text, std::vector<std::string>* warnings = nullptr);
SymMatrix read_matrix_file(const std::string& path, std::vector<std::string>* warnings = nullptr);

enum class Format { json, csv };

// Every report renders deterministically. CSV output starts with the fixed
// header row returned by the matching csv_header() overload.
std::string render(const DnVerdict& v, Format f);
std::string render(const SignScanResult& s, Format f);
std::string render(const ExponentScan& s, Format f);
std::string render(const DividedDiffTable& t, Format f);
std::string render(const ProbeReport& r, Format f);
std::string render(const ExponentEstimate& e, Format f);
std::string render(const SuiteReport& r, Format f);

// A matrix result (power, hpower, resolvent, quadpower) with its DN verdict.
struct MatrixResult {
  std::string operation;
  std::string func;
  SymMatrix value;
  DnVerdict verdict;
};
std::string render(const MatrixResult& r, Format f);

namespace csv_header {
inline constexpr std::string_view dn_verdict = "is_dn,min_eigenvalue,min_entry,psd_tol,entry_tol";
inline constexpr std::string_view sign_scan =
    "all_nonneg,max_order_checked,violation_order,violation_x,violation_value,grid";
inline constexpr std::string_view exponent_scan =
    "n,threshold,alpha,preserving,below_threshold,in_exceptional_set,violation_order,violation_x";
inline constexpr std::string_view divided_differences = "i,order,first_node,last_node,value";
inline constexpr std::string_view probe_report =
    "n,func,verdict,trials,seed,strategy,witness_i,witness_j,witness_value,witness_matrix";
inline constexpr std::string_view exponent_estimate =
    "n,family,alpha_lo,alpha_hi,lo_confirmed,resolution,alpha,outcome,trials,scan_all_nonneg";
inline constexpr std::string_view suite_report = "n,check,passed,worst_margin,detail";
inline constexpr std::string_view matrix_result = "operation,func,i,j,value";
}  // namespace csv_header

}  // namespace dncone
