#include "sphtp/coeff_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace sphtp {

using nlohmann::json;

namespace {

void emit(const json& v, int digits, std::string& out) {
  switch (v.type()) {
    case json::value_t::object: {
      out += '{';
      bool first = true;
      for (auto it = v.begin(); it != v.end(); ++it) {
        if (!first) out += ',';
        first = false;
        out += json(it.key()).dump();
        out += ':';
        emit(it.value(), digits, out);
      }
      out += '}';
      break;
    }
    case json::value_t::array: {
      out += '[';
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ',';
        emit(v[i], digits, out);
      }
      out += ']';
      break;
    }
    case json::value_t::number_float: {
      const double d = v.get<double>();
      if (!std::isfinite(d)) throw std::domain_error("canonical_json: non-finite number");
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.*g", digits, d);
      out += std::string(buf) == "-0" ? "0" : buf;
      break;
    }
    default:
      out += v.dump();
  }
}

const json& field(const json& obj, const std::string& ptr, const char* key) {
  if (!obj.is_object()) throw SchemaError(ptr, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw SchemaError(ptr + "/" + key, "missing field");
  return *it;
}

int as_int(const json& v, const std::string& ptr) {
  if (!v.is_number_integer()) throw SchemaError(ptr, "expected an integer");
  return v.get<int>();
}

int non_negative(const json& v, const std::string& ptr) {
  const int n = as_int(v, ptr);
  if (n < 0) throw SchemaError(ptr, "expected a non-negative integer");
  return n;
}

std::vector<double> numbers(const json& v, const std::string& ptr, std::size_t n) {
  if (!v.is_array()) throw SchemaError(ptr, "expected an array");
  if (v.size() != n) throw SchemaError(ptr, "expected " + std::to_string(n) + " entries, got " + std::to_string(v.size()));
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!v[i].is_number()) throw SchemaError(ptr + "/" + std::to_string(i), "expected a number");
    out[i] = v[i].get<double>();
  }
  return out;
}

struct RawBlock {
  int j;
  std::optional<int> l;
  std::optional<std::pair<int, int>> path;
  Eigen::VectorXcd v;
};

std::vector<RawBlock> read_blocks(const json& doc) {
  const json& blocks = field(doc, "", "blocks");
  if (!blocks.is_array()) throw SchemaError("/blocks", "expected an array");
  std::vector<RawBlock> out;
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    const std::string ptr = "/blocks/" + std::to_string(b);
    const json& e = blocks[b];
    RawBlock rb;
    rb.j = non_negative(field(e, ptr, "j"), ptr + "/j");
    if (auto it = e.find("l"); it != e.end() && !it->is_null()) rb.l = non_negative(*it, ptr + "/l");
    if (auto it = e.find("path"); it != e.end() && !it->is_null()) {
      if (!it->is_array() || it->size() != 2) throw SchemaError(ptr + "/path", "expected [j1, j2]");
      rb.path = std::pair{non_negative((*it)[0], ptr + "/path/0"), non_negative((*it)[1], ptr + "/path/1")};
    }
    const std::size_t n = static_cast<std::size_t>(2 * rb.j + 1);
    const json& m = field(e, ptr, "m");
    if (!m.is_array() || m.size() != n) throw SchemaError(ptr + "/m", "expected m = -j..j");
    for (std::size_t i = 0; i < n; ++i) {
      if (!m[i].is_number_integer() || m[i].get<int>() != static_cast<int>(i) - rb.j) {
        throw SchemaError(ptr + "/m/" + std::to_string(i), "expected " + std::to_string(static_cast<int>(i) - rb.j));
      }
    }
    const auto re = numbers(field(e, ptr, "re"), ptr + "/re", n);
    const auto im = numbers(field(e, ptr, "im"), ptr + "/im", n);
    rb.v.resize(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) rb.v(static_cast<Eigen::Index>(i)) = cplx(re[i], im[i]);
    out.push_back(std::move(rb));
  }
  return out;
}

json block_json(int j, std::optional<int> l, std::optional<std::pair<int, int>> path, const Eigen::VectorXcd& v) {
  json e;
  e["j"] = j;
  e["l"] = l ? json(*l) : json(nullptr);
  if (path) e["path"] = json::array({path->first, path->second});
  json m = json::array(), re = json::array(), im = json::array();
  for (int i = 0; i < v.size(); ++i) {
    m.push_back(i - j);
    re.push_back(v(i).real());
    im.push_back(v(i).imag());
  }
  e["m"] = std::move(m);
  e["re"] = std::move(re);
  e["im"] = std::move(im);
  return e;
}

}  // namespace

std::string canonical_json(const json& doc, int digits) {
  if (digits < 1 || digits > 17) throw std::invalid_argument("canonical_json: digits must be in 1..17");
  std::string out;
  emit(doc, digits, out);
  out += '\n';
  return out;
}

json to_json(const IrrepCoeffs& x) {
  json doc;
  doc["L"] = x.L;
  doc["blocks"] = json::array();
  for (const auto& [k, v] : x.blocks) doc["blocks"].push_back(block_json(k.j, k.l, k.path, v));
  return doc;
}

json to_json(const TshCoeffs& x) {
  json doc;
  doc["s"] = x.s();
  doc["L"] = x.L();
  doc["blocks"] = json::array();
  for (const auto& [k, v] : x.blocks()) doc["blocks"].push_back(block_json(k.first, k.second, std::nullopt, v));
  return doc;
}

int json_spin(const json& doc) {
  if (!doc.is_object()) throw SchemaError("", "expected an object");
  auto it = doc.find("s");
  return it == doc.end() ? 0 : non_negative(*it, "/s");
}

IrrepCoeffs irrep_from_json(const json& doc) {
  if (json_spin(doc) != 0) throw SchemaError("/s", "scalar coefficients must have s = 0");
  IrrepCoeffs x;
  x.L = non_negative(field(doc, "", "L"), "/L");
  const auto blocks = read_blocks(doc);
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    const auto& rb = blocks[b];
    const std::string ptr = "/blocks/" + std::to_string(b);
    if (rb.j > x.L) throw SchemaError(ptr + "/j", "degree exceeds L");
    if (rb.l && *rb.l != rb.j) throw SchemaError(ptr + "/l", "scalar blocks need l = j or null");
    const BlockKey key{rb.j, std::nullopt, rb.path};
    if (x.blocks.count(key)) throw SchemaError(ptr, "duplicate block");
    x.blocks[key] = rb.v;
  }
  return x;
}

TshCoeffs tsh_from_json(const json& doc) {
  const int s = json_spin(doc);
  const int L = non_negative(field(doc, "", "L"), "/L");
  TshCoeffs x(s, L);
  const auto blocks = read_blocks(doc);
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    const auto& rb = blocks[b];
    const std::string ptr = "/blocks/" + std::to_string(b);
    if (!rb.l) throw SchemaError(ptr + "/l", "tensor blocks need an integer l");
    if (rb.path) throw SchemaError(ptr + "/path", "not allowed in tensor coefficients");
    if (x.find(rb.j, *rb.l)) throw SchemaError(ptr, "duplicate block");
    try {
      x.set(rb.j, *rb.l, rb.v);
    } catch (const std::invalid_argument& e) {
      throw SchemaError(ptr, e.what());
    }
  }
  return x;
}

json samples_to_json(const SpinSignal& f, int L) {
  const auto& g = *f.grid;
  json doc;
  doc["L"] = L;
  doc["s"] = f.s;
  doc["grid"] = {{"Lg", g.Lg},
                 {"n_theta", g.n_theta()},
                 {"n_phi", g.n_phi},
                 {"cos_theta", g.cos_theta},
                 {"weights", g.weights},
                 {"phi", g.phi}};
  json re = json::array(), im = json::array();
  for (const cplx& c : f.values) {
    re.push_back(c.real());
    im.push_back(c.imag());
  }
  doc["re"] = std::move(re);
  doc["im"] = std::move(im);
  return doc;
}

json samples_to_json(const ScalarSignal& f, int L) { return samples_to_json(to_spin_signal(f), L); }

SpinSignal samples_from_json(const json& doc, int* L) {
  const int s = json_spin(doc);
  const int l = non_negative(field(doc, "", "L"), "/L");
  const json& gj = field(doc, "", "grid");
  const int Lg = non_negative(field(gj, "/grid", "Lg"), "/grid/Lg");
  const auto grid = make_grid(Lg);
  if (as_int(field(gj, "/grid", "n_theta"), "/grid/n_theta") != grid->n_theta()) {
    throw SchemaError("/grid/n_theta", "does not match Lg");
  }
  if (as_int(field(gj, "/grid", "n_phi"), "/grid/n_phi") != grid->n_phi) {
    throw SchemaError("/grid/n_phi", "does not match Lg");
  }
  auto check_nodes = [&](const char* key, const std::vector<double>& want) {
    const std::string ptr = std::string("/grid/") + key;
    const auto got = numbers(field(gj, "/grid", key), ptr, want.size());
    for (std::size_t i = 0; i < want.size(); ++i) {
      if (std::abs(got[i] - want[i]) > 1e-12) throw SchemaError(ptr + "/" + std::to_string(i), "does not match the grid for Lg");
    }
  };
  check_nodes("cos_theta", grid->cos_theta);
  check_nodes("weights", grid->weights);
  check_nodes("phi", grid->phi);

  SpinSignal f = zero_spin_signal(s, grid);
  const auto re = numbers(field(doc, "", "re"), "/re", f.values.size());
  const auto im = numbers(field(doc, "", "im"), "/im", f.values.size());
  for (std::size_t i = 0; i < f.values.size(); ++i) f.values[i] = cplx(re[i], im[i]);
  if (L) *L = l;
  return f;
}

SpinSignal to_spin_signal(const ScalarSignal& f) {
  SpinSignal out;
  out.s = 0;
  out.grid = f.grid;
  out.values = f.values;
  return out;
}

ScalarSignal to_scalar_signal(const SpinSignal& f) {
  if (f.s != 0) throw std::invalid_argument("to_scalar_signal: signal has spin " + std::to_string(f.s));
  return ScalarSignal{f.grid, f.values};
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw SchemaError("", path.string() + ": " + e.what());
  }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace sphtp
