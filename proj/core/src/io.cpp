#include "mgs/io.hpp"

#include <fstream>
#include <json.hpp>
#include <limits>
#include <sstream>

#include "mgs/errors.hpp"

namespace mgs {

using nlohmann::json;

namespace {

json int_to_json(const mpz_class& v) {
  if (mpz_fits_slong_p(v.get_mpz_t())) return static_cast<std::int64_t>(v.get_si());
  return v.get_str();
}

mpz_class int_from_json(const json& j) {
  if (j.is_number_integer()) return mpz_class(static_cast<long>(j.get<std::int64_t>()));
  if (j.is_string()) {
    mpz_class v;
    if (v.set_str(j.get<std::string>(), 10) != 0) throw ParseError("bad integer \"" + j.get<std::string>() + "\"");
    return v;
  }
  throw ParseError("matrix entries must be integers or decimal strings");
}

json parse(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
}

int read_n(const json& j) {
  if (!j.is_object() || !j.contains("n") || !j["n"].is_number_integer()) throw ParseError("missing integer field \"n\"");
  const int n = j["n"].get<int>();
  if (n < 1) throw DimensionError("n must be at least 1");
  return n;
}

const json& square(const json& j, const char* key, int N) {
  if (!j.contains(key) || !j[key].is_array() || static_cast<int>(j[key].size()) != N) {
    throw DimensionError(std::string("field \"") + key + "\" must be a " + std::to_string(N) + "x" + std::to_string(N) + " array");
  }
  for (const auto& row : j[key]) {
    if (!row.is_array() || static_cast<int>(row.size()) != N) {
      throw DimensionError(std::string("rows of \"") + key + "\" must have " + std::to_string(N) + " entries");
    }
  }
  return j[key];
}

}  // namespace

std::string matrix_to_json(const TransferMatrix& m) {
  const unsigned k = m.k_max();
  json a = json::array(), b = json::array();
  mpz_class x, y;
  for (int r = 0; r < m.dim(); ++r) {
    json ra = json::array(), rb = json::array();
    for (int c = 0; c < m.dim(); ++c) {
      m(r, c).integral_parts(k, x, y);
      ra.push_back(int_to_json(x));
      rb.push_back(int_to_json(y));
    }
    a.push_back(std::move(ra));
    b.push_back(std::move(rb));
  }
  json j = {{"n", m.n()}, {"scale_k", k}, {"a", std::move(a)}, {"b", std::move(b)}};
  return j.dump() + "\n";
}

TransferMatrix matrix_from_json(const std::string& text) {
  const json j = parse(text);
  const int n = read_n(j);
  const int N = 2 * n;
  if (!j.contains("scale_k") || !j["scale_k"].is_number_integer() || j["scale_k"].get<long>() < 0) {
    throw ParseError("missing nonnegative integer field \"scale_k\"");
  }
  const long k = j["scale_k"].get<long>();
  const json& a = square(j, "a", N);
  const json& b = square(j, "b", N);
  TransferMatrix m(n);
  for (int r = 0; r < N; ++r)
    for (int c = 0; c < N; ++c) m.set(r, c, RingScalar(int_from_json(a[r][c]), int_from_json(b[r][c]), k));
  return m;
}

bool json_is_ring_matrix(const std::string& text) {
  const json j = parse(text);
  return j.is_object() && j.contains("a") && j.contains("b");
}

std::string float_matrix_to_json(const Eigen::MatrixXd& m) {
  json values = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    values.push_back(std::move(row));
  }
  json j = {{"n", m.rows() / 2}, {"values", std::move(values)}};
  return j.dump() + "\n";
}

Eigen::MatrixXd float_matrix_from_json(const std::string& text) {
  if (json_is_ring_matrix(text)) return matrix_from_json(text).to_float();
  const json j = parse(text);
  const int n = read_n(j);
  const int N = 2 * n;
  const json& v = square(j, "values", N);
  Eigen::MatrixXd m(N, N);
  for (int r = 0; r < N; ++r) {
    for (int c = 0; c < N; ++c) {
      if (!v[r][c].is_number()) throw ParseError("matrix values must be numbers");
      m(r, c) = v[r][c].get<double>();
    }
  }
  return m;
}

std::string circuit_to_json(const Circuit& c) {
  json layers = json::array();
  for (const auto& layer : c.layers) {
    json l = json::array();
    for (const auto& g : layer) l.push_back({{"kind", kind_name(g.kind)}, {"q", g.q}});
    layers.push_back(std::move(l));
  }
  json j = {{"n", c.n}, {"layers", std::move(layers)}, {"t_count", c.t_count()}};
  return j.dump() + "\n";
}

Circuit circuit_from_json(const std::string& text) {
  const json j = parse(text);
  Circuit c;
  c.n = read_n(j);
  if (!j.contains("layers") || !j["layers"].is_array()) throw ParseError("missing array field \"layers\"");
  for (const auto& layer : j["layers"]) {
    if (!layer.is_array()) throw ParseError("each layer must be an array of gates");
    std::vector<GeneratorId> gates;
    for (const auto& g : layer) {
      if (!g.is_object() || !g.contains("kind") || !g["kind"].is_string() || !g.contains("q") || !g["q"].is_number_integer()) {
        throw ParseError("gates must be objects with string \"kind\" and integer \"q\"");
      }
      GeneratorId id{parse_kind(g["kind"].get<std::string>()), g["q"].get<int>()};
      check_site(c.n, id);
      gates.push_back(id);
    }
    c.layers.push_back(std::move(gates));
  }
  if (!c.layers_disjoint()) throw ParseError("a layer contains gates with overlapping support");
  if (j.contains("t_count") && (!j["t_count"].is_number_integer() || j["t_count"].get<int>() != c.t_count())) {
    throw ParseError("t_count field does not match the layers");
  }
  return c;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("cannot read " + path);
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << content;
  if (!out) throw IoError("cannot write " + path);
}

}  // namespace mgs
