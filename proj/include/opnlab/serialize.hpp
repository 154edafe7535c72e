#pragma once

#include "opnlab/eulerian.hpp"
#include "opnlab/gap.hpp"
#include "opnlab/scan.hpp"

#include <json.hpp>

#include <string>

namespace opnlab {

// All numbers serialize as decimal strings: arbitrary precision must survive
// JSON and CSV round trips.
using Json = nlohmann::ordered_json;

std::string to_decimal(const PosInt& n);
std::string to_decimal(const Rational& q);  // "num/den", or just "num" when den = 1

Json json_of(const ArithProfile& p);
Json json_of(const IndexReport& r);
Json json_of(const GapDecomposition& d);
Json json_of(const ImplicationVerdict& v);
Json json_of(const NearestSquareRecord& r);
Json json_of(const PredicateReport& r);
Json json_of(const ScanRecord& r);
Json json_of(const ScanSummary& s);

std::string case_token(int case_label);  // "Case1".."Case6", "inverted" for 0

// CSV: fixed header, comma separator, no quoting (numeric/enum fields only)
extern const char* const kScanCsvHeader;
void append_csv_line(std::string& out, const ScanRecord& r);

// classify's one-line format, e.g. "r=2 t=5 case=1 verdict=m<p^k"
std::string classify_line(const GapDecomposition& d, CaseLabel label,
                          const ImplicationVerdict& v);

}  // namespace opnlab
