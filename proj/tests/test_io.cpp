#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "entlab/error.hpp"
#include "entlab/io.hpp"
#include "support.hpp"

using namespace entlab;
using entlab::io::json;

namespace {

template <class T, class F>
T round_trip(const T& value, F&& reader) {
  return reader(json::parse(io::dump(io::to_json(value), 2)));
}

double max_abs(const Matrix& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("entlab_test_io_" + name)).string();
}

}  // namespace

TEST_CASE("floats are printed with 17 significant digits") {
  const json j = json::array({0.1, 1.0 / 3.0, 1e-300, 2.0});
  const std::string s = io::dump(j);
  CHECK(s == "[0.10000000000000001,0.33333333333333331,1e-300,2]");
  CHECK(io::dump(json{{"a", 0.7}}) == "{\"a\":0.69999999999999996}");
  const json back = json::parse(s);
  CHECK(back[1].get<double>() == 1.0 / 3.0);
  CHECK(io::dump(json{{"k", "x\"y"}, {"b", true}, {"n", nullptr}, {"i", 3}}) ==
        "{\"k\":\"x\\\"y\",\"b\":true,\"n\":null,\"i\":3}");
  CHECK(io::dump(json::object()) == "{}");
  CHECK(io::dump(json::array()) == "[]");
}

TEST_CASE("spectrum, step function and measure round trips") {
  std::mt19937_64 rng(51);
  for (int trial = 0; trial < 50; ++trial) {
    const Spectrum s(oracle::random_probabilities(1 + static_cast<int>(rng() % 6), rng));
    CHECK(round_trip(s, io::spectrum_from_json) == s);
    const StepFunction f = spectral_scale(s);
    CHECK(round_trip(f, io::stepfn_from_json) == f);
    const AtomicMeasure m = spectral_state(s);
    const AtomicMeasure back = round_trip(m, io::measure_from_json);
    REQUIRE(back.size() == m.size());
    for (std::size_t i = 0; i < m.size(); ++i) {
      CHECK(back.masses()[i] == m.masses()[i]);
      CHECK(std::abs(back.log_atoms()[i] - m.log_atoms()[i]) < 1e-15);
    }
  }
  CHECK(io::kind_of(io::to_json(Spectrum({1.0}))) == "spectrum");
}

TEST_CASE("state, density and operator round trips") {
  std::mt19937_64 rng(52);
  for (int trial = 0; trial < 30; ++trial) {
    const int dA = 1 + static_cast<int>(rng() % 4), dB = 1 + static_cast<int>(rng() % 4);
    const PureBipartiteState psi = PureBipartiteState::normalized(dA, dB, gaussian_vector(dA * dB, rng));
    const PureBipartiteState p2 = round_trip(psi, io::pure_from_json);
    CHECK(p2.dim_A() == dA);
    CHECK(p2.dim_B() == dB);
    CHECK((p2.amplitudes() - psi.amplitudes()).norm() == 0.0);

    const DensityMatrix rho = marginal(psi, Party::A);
    CHECK(max_abs(round_trip(rho, io::density_from_json).matrix() - rho.matrix()) < 1e-15);
    // A pure state file reads as its A-marginal.
    CHECK(max_abs(io::density_from_json(io::to_json(psi)).matrix() - rho.matrix()) < 1e-15);

    const Matrix op = haar_unitary(dA, rng).leftCols(std::max(1, dA - 1));
    const Matrix o2 = round_trip(op, io::operator_from_json);
    CHECK(o2.rows() == op.rows());
    CHECK(o2.cols() == op.cols());
    CHECK(max_abs(o2 - op) == 0.0);
  }
}

TEST_CASE("multipartite, protocol and type label round trips") {
  const MultipartiteState g = ghz_state(3);
  const MultipartiteState g2 = round_trip(g, io::multipartite_from_json);
  CHECK(g2.dims == g.dims);
  CHECK((g2.amplitudes - g.amplitudes).norm() == 0.0);

  const PureBipartiteState bell = PureBipartiteState::maximally_entangled(2);
  OneWayProtocol ow = nielsen_synthesize(bell, PureBipartiteState::from_schmidt(std::vector<double>{std::sqrt(0.7), std::sqrt(0.3)}));
  ow.labels = {"first", "second"};
  const OneWayProtocol ow2 = round_trip(ow, io::one_way_from_json);
  REQUIRE(ow2.alice_kraus.size() == 2);
  CHECK(ow2.labels == ow.labels);
  for (std::size_t i = 0; i < 2; ++i) {
    CHECK(max_abs(ow2.alice_kraus[i] - ow.alice_kraus[i]) == 0.0);
    CHECK(max_abs(ow2.bob_unitaries[i] - ow.bob_unitaries[i]) == 0.0);
  }

  for (const auto& item : oracle::protocol_corpus(20, 99)) {
    const LoccProtocol p2 = round_trip(item.protocol, io::protocol_from_json);
    REQUIRE(p2.rounds.size() == item.protocol.rounds.size());
    for (std::size_t r = 0; r < p2.rounds.size(); ++r) {
      const Round& a = item.protocol.rounds[r];
      const Round& b = p2.rounds[r];
      CHECK(a.party == b.party);
      REQUIRE(a.branches.size() == b.branches.size());
      for (std::size_t k = 0; k < a.branches.size(); ++k) {
        CHECK(a.branches[k].first == b.branches[k].first);
        CHECK(a.branches[k].second.labels == b.branches[k].second.labels);
        REQUIRE(a.branches[k].second.kraus.size() == b.branches[k].second.kraus.size());
        for (std::size_t x = 0; x < a.branches[k].second.kraus.size(); ++x)
          CHECK(max_abs(a.branches[k].second.kraus[x] - b.branches[k].second.kraus[x]) == 0.0);
      }
    }
    // Simulation of the parsed protocol is identical.
    const auto la = simulate(item.protocol, item.psi), lb = simulate(p2, item.psi);
    REQUIRE(la.size() == lb.size());
    for (std::size_t i = 0; i < la.size(); ++i) CHECK(la[i].probability == lb[i].probability);
  }

  const TypeLabel t = classify_itpfi(std::vector<double>{2.0 / 3.0, 1.0 / 3.0});
  const json tj = io::to_json(t);
  CHECK(tj["family"] == "III_lambda");
  CHECK(tj["lambda"].get<double>() == doctest::Approx(0.5));
  const TypeLabel t2 = io::type_label_from_json(tj);
  CHECK(t2.family == t.family);
  CHECK(*t2.lambda == *t.lambda);
  const json ii = io::to_json(classify_itpfi(std::vector<double>{0.5, 0.5}));
  CHECK_FALSE(ii.contains("lambda"));
  CHECK(io::type_label_from_json(ii).family == TypeLabel::Family::II_1);
}

TEST_CASE("readers reject malformed documents") {
  CHECK_THROWS_AS(io::kind_of(json::object()), Error);
  CHECK_THROWS_AS(io::spectrum_from_json(json{{"kind", "measure"}, {"values", {1.0}}}), Error);
  CHECK_THROWS_AS(io::spectrum_from_json(json{{"kind", "spectrum"}, {"values", "x"}}), Error);
  CHECK_THROWS_AS(io::pure_from_json(json{{"kind", "pure_bipartite"}, {"dims", {2, 2}}, {"amplitudes", {{1.0, 0.0}}}}), Error);
  CHECK_THROWS_AS(io::pure_from_json(json{{"kind", "pure_bipartite"}, {"dims", {1, 1}}, {"amplitudes", {{0.5, 0.0}}}}), Error);
  CHECK_THROWS_AS(io::operator_from_json(json{{"kind", "operator"}, {"shape", {1, 2}}, {"rows", {{{1.0, 0.0}}}}}), Error);
  CHECK_THROWS_AS(io::protocol_from_json(json{{"kind", "locc_protocol"}, {"rounds", {{{"party", "C"}, {"branches", json::object()}}}}}), Error);
  CHECK_THROWS_AS(io::read_file("/nonexistent/entlab/file.json"), Error);
  const std::string bad = temp_path("bad.json");
  std::ofstream(bad) << "{not json";
  try {
    (void)io::read_file(bad);
    FAIL("expected failure");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::invalid_input);
  }
  std::filesystem::remove(bad);
}

TEST_CASE("csv output") {
  io::Table empty{{"n", "fidelity"}, {}};
  CHECK(io::to_csv(empty) == "n,fidelity\r\n");

  io::Table t{{"name", "value", "count", "ok"}, {}};
  t.rows.push_back({std::string("plain"), 0.1, std::int64_t{3}, true});
  t.rows.push_back({std::string("a,b"), 1.0 / 3.0, std::int64_t{-1}, false});
  t.rows.push_back({std::string("say \"hi\""), 2.0, std::int64_t{0}, true});
  t.rows.push_back({std::string("two\nlines"), 1e-20, std::int64_t{7}, false});
  CHECK(io::to_csv(t) ==
        "name,value,count,ok\r\n"
        "plain,0.10000000000000001,3,true\r\n"
        "\"a,b\",0.33333333333333331,-1,false\r\n"
        "\"say \"\"hi\"\"\",2,0,true\r\n"
        "\"two\nlines\",9.9999999999999995e-21,7,false\r\n");

  const json j = io::to_json(t);
  REQUIRE(j.is_array());
  CHECK(j.size() == 4);
  CHECK(j[1]["name"] == "a,b");
  CHECK(j[0]["count"] == 3);
  CHECK(j[0]["ok"] == true);
  CHECK(j[0].begin().key() == "name");
  CHECK(io::to_json(empty).dump() == "[]");

  io::Table ragged{{"a", "b"}, {{std::string("x")}}};
  CHECK_THROWS_AS(io::to_csv(ragged), Error);
}

TEST_CASE("emit writes files and reports unwritable paths") {
  io::Table t{{"t", "deviation"}, {{0.0, 0.0}, {0.5, 0.25}}};
  const std::string path = temp_path("table.csv");
  io::emit(t, io::Format::csv, path);
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  CHECK(ss.str() == io::to_csv(t));
  std::filesystem::remove(path);

  try {
    io::emit(t, io::Format::json, "/nonexistent/dir/out.json");
    FAIL("expected failure");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::io_failure);
  }
}
