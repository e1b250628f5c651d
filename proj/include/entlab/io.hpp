#pragma once

// JSON schemas for states, operators and protocols; CSV/JSON table output.
//
// Every document carries a "kind" tag. Complex numbers are [re, im] pairs.
//   spectrum       {"values": [...]}
//   stepfn         {"breakpoints": [...], "levels": [...]}
//   measure        {"atoms": [...], "masses": [...]}
//   pure_bipartite {"dims": [dA, dB], "amplitudes": [[re, im], ...]}
//   density        {"dim": d, "rows": [[[re, im], ...], ...]}
//   operator       {"shape": [r, c], "rows": [[[re, im], ...], ...]}
//   multipartite   {"dims": [...], "amplitudes": [[re, im], ...]}
//   one_way        {"alice_kraus": [operator...], "bob_unitaries": [operator...],
//                   "labels": [...]}
//   locc_protocol  {"rounds": [{"party": "A" | "B",
//                   "branches": {"<history>": {"kraus": [operator...],
//                                              "labels": [...]}}}]}

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

#include "entlab/embezzle.hpp"
#include "entlab/locc.hpp"
#include "entlab/quantum.hpp"
#include "entlab/spectra.hpp"

namespace entlab::io {

using json = nlohmann::ordered_json;

/// Serializes with every float printed as %.17g.
std::string dump(const json& j, int indent = -1);
/// Reads and parses a file. Throws invalid_input on a missing file or bad JSON.
json read_file(const std::string& path);
/// Writes text to path, or stdout when path is empty. Throws io_failure.
void write_text(const std::string& path, const std::string& text);

/// The "kind" tag, or invalid_input when absent.
std::string kind_of(const json& j);

json to_json(const Spectrum& s);
json to_json(const StepFunction& f);
json to_json(const AtomicMeasure& m);
json to_json(const PureBipartiteState& psi);
json to_json(const DensityMatrix& rho);
json to_json(const Matrix& op);
json to_json(const MultipartiteState& s);
json to_json(const OneWayProtocol& p);
json to_json(const LoccProtocol& p);
json to_json(const TypeLabel& t);

Spectrum spectrum_from_json(const json& j);
StepFunction stepfn_from_json(const json& j);
AtomicMeasure measure_from_json(const json& j);
PureBipartiteState pure_from_json(const json& j);
/// Accepts "density" or "pure_bipartite" (reduced to the A-marginal).
DensityMatrix density_from_json(const json& j);
Matrix operator_from_json(const json& j);
MultipartiteState multipartite_from_json(const json& j);
OneWayProtocol one_way_from_json(const json& j);
LoccProtocol protocol_from_json(const json& j);
TypeLabel type_label_from_json(const json& j);

// ---------------------------------------------------------------------------
// Tables

using Cell = std::variant<std::string, double, std::int64_t, bool>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

enum class Format { csv, json };

/// CSV: single header row, RFC-4180 quoting, floats as %.17g.
std::string to_csv(const Table& t);
/// JSON: array of records in column order.
json to_json(const Table& t);
void emit(const Table& t, Format format, const std::string& path);

}  // namespace entlab::io
