#include "entlab/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "entlab/error.hpp"

namespace entlab::io {

namespace {

std::string format_double(double x) {
  if (!std::isfinite(x)) return "null";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void dump_to(std::ostringstream& out, const json& j, int indent, int level) {
  const auto newline = [&](int lvl) {
    if (indent < 0) return;
    out << '\n' << std::string(static_cast<std::size_t>(indent * lvl), ' ');
  };
  switch (j.type()) {
    case json::value_t::object: {
      if (j.empty()) {
        out << "{}";
        return;
      }
      out << '{';
      bool first = true;
      for (const auto& [key, value] : j.items()) {
        if (!first) out << ',';
        first = false;
        newline(level + 1);
        out << json(key).dump() << (indent < 0 ? ":" : ": ");
        dump_to(out, value, indent, level + 1);
      }
      newline(level);
      out << '}';
      return;
    }
    case json::value_t::array: {
      if (j.empty()) {
        out << "[]";
        return;
      }
      out << '[';
      bool first = true;
      for (const auto& value : j) {
        if (!first) out << ',';
        first = false;
        newline(level + 1);
        dump_to(out, value, indent, level + 1);
      }
      newline(level);
      out << ']';
      return;
    }
    case json::value_t::number_float:
      out << format_double(j.get<double>());
      return;
    default:
      out << j.dump();
  }
}

[[noreturn]] void bad(const std::string& what) { fail(ErrorKind::invalid_input, what); }

const json& field(const json& j, const char* name) {
  if (!j.is_object() || !j.contains(name)) bad(std::string("missing field \"") + name + "\"");
  return j.at(name);
}

void expect_kind(const json& j, const char* kind) {
  const std::string k = kind_of(j);
  if (k != kind) bad("expected kind \"" + std::string(kind) + "\", got \"" + k + "\"");
}

double number(const json& j) {
  if (!j.is_number()) bad("expected a number");
  return j.get<double>();
}

int positive_int(const json& j) {
  if (!j.is_number_integer() || j.get<long long>() < 1) bad("expected a positive integer");
  return j.get<int>();
}

std::vector<double> numbers(const json& j) {
  if (!j.is_array()) bad("expected an array of numbers");
  std::vector<double> out;
  out.reserve(j.size());
  for (const auto& x : j) out.push_back(number(x));
  return out;
}

std::vector<std::string> strings(const json& j) {
  if (!j.is_array()) bad("expected an array of strings");
  std::vector<std::string> out;
  for (const auto& x : j) {
    if (!x.is_string()) bad("expected a string");
    out.push_back(x.get<std::string>());
  }
  return out;
}

json complex_json(cplx z) { return json::array({z.real(), z.imag()}); }

cplx complex_from(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2) bad("complex entries are [re, im] pairs");
  return {number(j[0]), number(j[1])};
}

json vector_json(const Vector& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(complex_json(v(i)));
  return a;
}

Vector vector_from(const json& j) {
  if (!j.is_array()) bad("amplitudes must be an array");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = complex_from(j[i]);
  return v;
}

json rows_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(complex_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix rows_from(const json& j, Eigen::Index r, Eigen::Index c) {
  if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != r) bad("row count mismatch");
  Matrix m(r, c);
  for (Eigen::Index i = 0; i < r; ++i) {
    const json& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != c) bad("column count mismatch");
    for (Eigen::Index k = 0; k < c; ++k) m(i, k) = complex_from(row[static_cast<std::size_t>(k)]);
  }
  return m;
}

json operators_json(const std::vector<Matrix>& ops) {
  json a = json::array();
  for (const auto& op : ops) a.push_back(to_json(op));
  return a;
}

std::vector<Matrix> operators_from(const json& j) {
  if (!j.is_array()) bad("expected an array of operators");
  std::vector<Matrix> out;
  for (const auto& x : j) out.push_back(operator_from_json(x));
  return out;
}

std::string party_name(Party p) { return p == Party::A ? "A" : "B"; }

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + '"';
}

std::string cell_text(const Cell& c) {
  struct Visitor {
    std::string operator()(const std::string& s) const { return s; }
    std::string operator()(double x) const { return format_double(x); }
    std::string operator()(std::int64_t x) const { return std::to_string(x); }
    std::string operator()(bool b) const { return b ? "true" : "false"; }
  };
  return std::visit(Visitor{}, c);
}

}  // namespace

std::string dump(const json& j, int indent) {
  std::ostringstream out;
  dump_to(out, j, indent, 0);
  return out.str();
}

json read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) bad("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    bad(path + ": " + e.what());
  }
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::io_failure, "cannot write " + path);
  out << text;
  out.close();
  if (!out) fail(ErrorKind::io_failure, "write failed for " + path);
}

std::string kind_of(const json& j) {
  const json& k = field(j, "kind");
  if (!k.is_string()) bad("\"kind\" must be a string");
  return k.get<std::string>();
}

json to_json(const Spectrum& s) {
  return {{"kind", "spectrum"}, {"values", std::vector<double>(s.values().begin(), s.values().end())}};
}

json to_json(const StepFunction& f) {
  return {{"kind", "stepfn"},
          {"breakpoints", std::vector<double>(f.breakpoints().begin(), f.breakpoints().end())},
          {"levels", std::vector<double>(f.levels().begin(), f.levels().end())}};
}

json to_json(const AtomicMeasure& m) {
  return {{"kind", "measure"},
          {"atoms", m.atoms()},
          {"masses", std::vector<double>(m.masses().begin(), m.masses().end())}};
}

json to_json(const PureBipartiteState& psi) {
  return {{"kind", "pure_bipartite"},
          {"dims", {psi.dim_A(), psi.dim_B()}},
          {"amplitudes", vector_json(psi.amplitudes())}};
}

json to_json(const DensityMatrix& rho) {
  return {{"kind", "density"}, {"dim", rho.dim()}, {"rows", rows_json(rho.matrix())}};
}

json to_json(const Matrix& op) {
  return {{"kind", "operator"}, {"shape", {op.rows(), op.cols()}}, {"rows", rows_json(op)}};
}

json to_json(const MultipartiteState& s) {
  return {{"kind", "multipartite"}, {"dims", s.dims}, {"amplitudes", vector_json(s.amplitudes)}};
}

json to_json(const OneWayProtocol& p) {
  json j = {{"kind", "one_way"},
            {"alice_kraus", operators_json(p.alice_kraus)},
            {"bob_unitaries", operators_json(p.bob_unitaries)}};
  if (!p.labels.empty()) j["labels"] = p.labels;
  return j;
}

json to_json(const LoccProtocol& p) {
  json rounds = json::array();
  for (const Round& r : p.rounds) {
    json branches = json::object();
    for (const auto& [key, inst] : r.branches) {
      json b = {{"kraus", operators_json(inst.kraus)}};
      if (!inst.labels.empty()) b["labels"] = inst.labels;
      branches[key] = std::move(b);
    }
    rounds.push_back({{"party", party_name(r.party)}, {"branches", std::move(branches)}});
  }
  return {{"kind", "locc_protocol"}, {"rounds", std::move(rounds)}};
}

json to_json(const TypeLabel& t) {
  json j = {{"family", t.name()}};
  if (t.lambda) j["lambda"] = *t.lambda;
  return j;
}

Spectrum spectrum_from_json(const json& j) {
  expect_kind(j, "spectrum");
  return Spectrum(numbers(field(j, "values")));
}

StepFunction stepfn_from_json(const json& j) {
  expect_kind(j, "stepfn");
  return StepFunction(numbers(field(j, "breakpoints")), numbers(field(j, "levels")));
}

AtomicMeasure measure_from_json(const json& j) {
  expect_kind(j, "measure");
  const std::vector<double> atoms = numbers(field(j, "atoms"));
  const std::vector<double> masses = numbers(field(j, "masses"));
  if (atoms.size() != masses.size()) bad("atoms and masses differ in length");
  return AtomicMeasure(atoms, masses);
}

PureBipartiteState pure_from_json(const json& j) {
  expect_kind(j, "pure_bipartite");
  const json& dims = field(j, "dims");
  if (!dims.is_array() || dims.size() != 2) bad("dims must be [dA, dB]");
  const int d_A = positive_int(dims[0]);
  const int d_B = positive_int(dims[1]);
  Vector amps = vector_from(field(j, "amplitudes"));
  if (amps.size() != static_cast<Eigen::Index>(d_A) * d_B) bad("amplitude count does not match dims");
  return PureBipartiteState(d_A, d_B, std::move(amps));
}

DensityMatrix density_from_json(const json& j) {
  const std::string k = kind_of(j);
  if (k == "pure_bipartite") return marginal(pure_from_json(j), Party::A);
  expect_kind(j, "density");
  const int d = positive_int(field(j, "dim"));
  return DensityMatrix(rows_from(field(j, "rows"), d, d));
}

Matrix operator_from_json(const json& j) {
  expect_kind(j, "operator");
  const json& shape = field(j, "shape");
  if (!shape.is_array() || shape.size() != 2) bad("shape must be [rows, cols]");
  return rows_from(field(j, "rows"), positive_int(shape[0]), positive_int(shape[1]));
}

MultipartiteState multipartite_from_json(const json& j) {
  expect_kind(j, "multipartite");
  MultipartiteState s;
  for (const auto& d : field(j, "dims")) s.dims.push_back(positive_int(d));
  s.amplitudes = vector_from(field(j, "amplitudes"));
  return s;
}

OneWayProtocol one_way_from_json(const json& j) {
  expect_kind(j, "one_way");
  OneWayProtocol p;
  p.alice_kraus = operators_from(field(j, "alice_kraus"));
  p.bob_unitaries = operators_from(field(j, "bob_unitaries"));
  if (p.alice_kraus.size() != p.bob_unitaries.size()) bad("Kraus and correction counts differ");
  if (j.contains("labels")) {
    p.labels = strings(j.at("labels"));
    if (p.labels.size() != p.alice_kraus.size()) bad("label count differs from branch count");
  }
  return p;
}

LoccProtocol protocol_from_json(const json& j) {
  expect_kind(j, "locc_protocol");
  LoccProtocol p;
  const json& rounds = field(j, "rounds");
  if (!rounds.is_array()) bad("rounds must be an array");
  for (const auto& r : rounds) {
    Round round;
    const json& party = field(r, "party");
    if (party == "A") round.party = Party::A;
    else if (party == "B") round.party = Party::B;
    else bad("party must be \"A\" or \"B\"");
    const json& branches = field(r, "branches");
    if (!branches.is_object()) bad("branches must be an object keyed by history");
    for (const auto& [key, b] : branches.items()) {
      Instrument inst;
      inst.kraus = operators_from(field(b, "kraus"));
      if (b.contains("labels")) inst.labels = strings(b.at("labels"));
      round.branches.emplace_back(key, std::move(inst));
    }
    p.rounds.push_back(std::move(round));
  }
  return p;
}

TypeLabel type_label_from_json(const json& j) {
  const json& f = field(j, "family");
  if (!f.is_string()) bad("family must be a string");
  const std::string name = f.get<std::string>();
  TypeLabel t;
  if (name == "I_n") t.family = TypeLabel::Family::I;
  else if (name == "II_1") t.family = TypeLabel::Family::II_1;
  else if (name == "III_1") t.family = TypeLabel::Family::III_1;
  else if (name == "III_lambda") {
    t.family = TypeLabel::Family::III_lambda;
    const double l = number(field(j, "lambda"));
    if (!(l > 0.0 && l < 1.0)) bad("III_lambda needs lambda in (0, 1)");
    t.lambda = l;
  } else {
    bad("unknown family " + name);
  }
  return t;
}

std::string to_csv(const Table& t) {
  std::string out;
  for (std::size_t c = 0; c < t.columns.size(); ++c) {
    if (c) out += ',';
    out += csv_field(t.columns[c]);
  }
  out += "\r\n";
  for (const auto& row : t.rows) {
    if (row.size() != t.columns.size()) fail(ErrorKind::invalid_input, "ragged table row");
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out += ',';
      out += csv_field(cell_text(row[c]));
    }
    out += "\r\n";
  }
  return out;
}

json to_json(const Table& t) {
  json a = json::array();
  for (const auto& row : t.rows) {
    if (row.size() != t.columns.size()) fail(ErrorKind::invalid_input, "ragged table row");
    json rec = json::object();
    for (std::size_t c = 0; c < row.size(); ++c) {
      std::visit([&](const auto& v) { rec[t.columns[c]] = v; }, row[c]);
    }
    a.push_back(std::move(rec));
  }
  return a;
}

void emit(const Table& t, Format format, const std::string& path) {
  write_text(path, format == Format::csv ? to_csv(t) : dump(to_json(t), 2) + "\n");
}

}  // namespace entlab::io
