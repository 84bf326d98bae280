#include "sphtp/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

#include "sphtp/rules.hpp"
#include "sphtp/tenprod.hpp"

namespace sphtp {

namespace {

struct Named {
  Method m;
  const char* name;
};
constexpr Named kMethods[] = {{Method::cgtp_naive, "cgtp_naive"}, {Method::cgtp_sparse, "cgtp_sparse"},
                              {Method::gtp_grid, "gtp_grid"},     {Method::vstp_grid, "vstp_grid"},
                              {Method::istp_grid, "istp_grid"},   {Method::cgtp_vstp_sim, "cgtp_vstp_sim"}};

int spin_of(Method m, const BenchOptions& opt) {
  switch (m) {
    case Method::gtp_grid: return 0;
    case Method::vstp_grid: return 1;
    case Method::istp_grid: return opt.istp_spin;
    default: return 0;
  }
}

Eigen::VectorXcd random_block(int j, std::mt19937_64& rng, bool zero) {
  std::normal_distribution<double> n(0.0, 1.0);
  Eigen::VectorXcd v(2 * j + 1);
  for (auto& c : v) c = zero ? cplx{} : cplx(n(rng), n(rng));
  return v;
}

// ---- CGTP cells -----------------------------------------------------------

struct Triple {
  int j1, j2, j3;
};

std::vector<Triple> cgtp_paths(Setting setting, int L) {
  std::vector<Triple> out;
  switch (setting) {
    case Setting::SISO:
      out.push_back({L, L, L});
      break;
    case Setting::SIMO:
      for (int j3 = 0; j3 <= 2 * L; ++j3) out.push_back({L, L, j3});
      break;
    case Setting::MIMO:
      for (int j1 = 0; j1 <= L; ++j1) {
        for (int j2 = 0; j2 <= L; ++j2) {
          for (int j3 = std::abs(j1 - j2); j3 <= j1 + j2; ++j3) out.push_back({j1, j2, j3});
        }
      }
      break;
  }
  return out;
}

std::uint64_t run_cgtp(Setting setting, int L, CgtpMode mode, std::mt19937_64& rng, bool zero) {
  if (setting == Setting::SISO) {
    std::uint64_t flops = 0;
    const auto x = random_block(L, rng, zero), y = random_block(L, rng, zero);
    cgtp_path(x, y, L, mode, &flops);
    return flops;
  }
  IrrepCoeffs x, y;
  x.L = y.L = L;
  const int lo = setting == Setting::SIMO ? L : 0;
  for (int j = lo; j <= L; ++j) x.block(j) = random_block(j, rng, zero);
  for (int j = lo; j <= L; ++j) y.block(j) = random_block(j, rng, zero);
  return cgtp_full(x, y, 2 * L, mode).flops;
}

// ---- grid cells -----------------------------------------------------------

struct GridCell {
  TshCoeffs x, y;
  int s3 = 0;
  int L3 = 0;
};

GridCell grid_cell(Setting setting, int L, int s, std::mt19937_64& rng, bool zero) {
  GridCell c{TshCoeffs(s, L), TshCoeffs(s, L), s, setting == Setting::SISO ? L : 2 * L};
  if (setting == Setting::MIMO) {
    for (auto [j, l] : tsh_keys(s, L)) c.x.set(j, l, random_block(j, rng, zero));
    for (auto [j, l] : tsh_keys(s, L)) c.y.set(j, l, random_block(j, rng, zero));
  } else {
    const int j = triangle(L, L, s) ? L : s;
    c.x.set(j, L, random_block(j, rng, zero));
    c.y.set(j, L, random_block(j, rng, zero));
  }
  return c;
}

std::uint64_t encode_flops(const TshCoeffs& x, int Lg) {
  std::uint64_t n = static_cast<std::uint64_t>(2 * x.s() + 1) * sht_flops(x.L(), Lg);
  for (const auto& [key, v] : x.blocks()) n += cgtp_sparse_flops(key.second, x.s(), key.first);
  return n;
}

std::uint64_t istp_flops(const TshCoeffs& x, const TshCoeffs& y, int s3, int L3) {
  const int Lg = x.L() + y.L();
  const auto nt = static_cast<std::uint64_t>(Lg + 1), np = static_cast<std::uint64_t>(2 * Lg + 1);
  std::uint64_t n = encode_flops(x, Lg) + encode_flops(y, Lg);
  n += nt * np * cgtp_sparse_flops(x.s(), y.s(), s3);
  n += static_cast<std::uint64_t>(2 * s3 + 1) * sht_flops(L3, Lg);
  for (auto [j, l] : tsh_keys(s3, L3)) n += cgtp_sparse_flops(l, s3, j);
  return n;
}

// ---- CGTP through VSTPs ---------------------------------------------------

// For one input pair, j3 values sharing (l1, l2) are served by a single VSTP
// decoded at the largest l3 of the group.
struct SimGroup {
  int l1, l2, l3max;
  std::vector<std::pair<int, int>> outputs;  // (j3, l3)
};

std::vector<SimGroup> sim_groups(int j1, int j2, const std::vector<int>& j3s) {
  std::map<std::pair<int, int>, SimGroup> groups;
  for (int j3 : j3s) {
    if (j1 == 0 && j2 == 0 && j3 == 0) continue;
    const auto [l1, l2, l3] = find_valid_ells(j1, j2, j3);
    auto [it, fresh] = groups.try_emplace({l1, l2}, SimGroup{l1, l2, l3, {}});
    it->second.l3max = std::max(it->second.l3max, l3);
    it->second.outputs.emplace_back(j3, l3);
  }
  std::vector<SimGroup> out;
  for (auto& [k, g] : groups) out.push_back(std::move(g));
  return out;
}

struct SimPair {
  int j1, j2;
  std::vector<int> j3s;
};

std::vector<SimPair> sim_pairs(Setting setting, int L) {
  std::map<std::pair<int, int>, std::vector<int>> m;
  for (const auto& t : cgtp_paths(setting, L)) m[{t.j1, t.j2}].push_back(t.j3);
  std::vector<SimPair> out;
  for (auto& [k, v] : m) out.push_back({k.first, k.second, std::move(v)});
  return out;
}

std::uint64_t sim_projection(Setting setting, int L) {
  std::uint64_t n = 0;
  for (const auto& [j1, j2, j3s] : sim_pairs(setting, L)) {
    if (j1 == 0 && j2 == 0) n += 1;
    for (const auto& g : sim_groups(j1, j2, j3s)) {
      TshCoeffs x(1, g.l1), y(1, g.l2);
      x.block(j1, g.l1);
      y.block(j2, g.l2);
      n += istp_flops(x, y, 1, g.l3max);
    }
  }
  return n;
}

std::uint64_t run_sim(Setting setting, int L, std::mt19937_64& rng, bool zero) {
  std::uint64_t n = 0;
  for (const auto& [j1, j2, j3s] : sim_pairs(setting, L)) {
    const auto xv = random_block(j1, rng, zero), yv = random_block(j2, rng, zero);
    if (j1 == 0 && j2 == 0) {
      volatile cplx prod = xv(0) * yv(0);
      (void)prod;
      n += 1;
    }
    for (const auto& g : sim_groups(j1, j2, j3s)) {
      TshCoeffs x(1, g.l1), y(1, g.l2);
      x.set(j1, g.l1, xv);
      y.set(j2, g.l2, yv);
      const auto r = vstp(x, y, g.l3max);
      n += r.flops;
      for (auto [j3, l3] : g.outputs) {
        const double c = generalized_gaunt(PathKey::vector(j1, g.l1, j2, g.l2, j3, l3));
        Eigen::VectorXcd z = *r.output.find(j3, l3) / c;
        (void)z;
      }
    }
  }
  return n;
}

std::uint64_t execute(Method method, Setting setting, int L, const BenchOptions& opt) {
  std::mt19937_64 rng(opt.seed);
  switch (method) {
    case Method::cgtp_naive: return run_cgtp(setting, L, CgtpMode::naive, rng, opt.zero_inputs);
    case Method::cgtp_sparse: return run_cgtp(setting, L, CgtpMode::sparse, rng, opt.zero_inputs);
    case Method::cgtp_vstp_sim: return run_sim(setting, L, rng, opt.zero_inputs);
    default: break;
  }
  const int s = spin_of(method, opt);
  auto c = grid_cell(setting, L, s, rng, opt.zero_inputs);
  return istp(c.x, c.y, c.s3, c.L3).flops;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream ss(line);
  while (std::getline(ss, cur, sep)) out.push_back(cur);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string to_string(Method m) {
  for (const auto& n : kMethods) {
    if (n.m == m) return n.name;
  }
  throw std::invalid_argument("unknown method");
}

std::string to_string(Setting s) {
  switch (s) {
    case Setting::SISO: return "SISO";
    case Setting::SIMO: return "SIMO";
    case Setting::MIMO: return "MIMO";
  }
  throw std::invalid_argument("unknown setting");
}

Method parse_method(const std::string& name) {
  for (const auto& n : kMethods) {
    if (name == n.name) return n.m;
  }
  throw std::invalid_argument("unknown method '" + name + "'");
}

Setting parse_setting(const std::string& name) {
  if (name == "SISO") return Setting::SISO;
  if (name == "SIMO") return Setting::SIMO;
  if (name == "MIMO") return Setting::MIMO;
  throw std::invalid_argument("unknown setting '" + name + "'");
}

const std::vector<Method>& all_methods() {
  static const std::vector<Method> v{Method::cgtp_naive, Method::cgtp_sparse, Method::gtp_grid,
                                     Method::vstp_grid,  Method::istp_grid,   Method::cgtp_vstp_sim};
  return v;
}

std::uint64_t BenchOptions::default_flop_budget() {
  if (const char* env = std::getenv("SPHTP_FLOP_BUDGET")) {
    char* end = nullptr;
    const double v = std::strtod(env, &end);
    if (end != env && v > 0) return static_cast<std::uint64_t>(v);
  }
  return 40'000'000'000ULL;
}

std::uint64_t projected_flops(Method method, Setting setting, int L, const BenchOptions& opt) {
  if (L < 0) throw std::invalid_argument("projected_flops: negative L");
  switch (method) {
    case Method::cgtp_naive:
    case Method::cgtp_sparse: {
      std::uint64_t n = 0;
      for (const auto& t : cgtp_paths(setting, L)) {
        n += method == Method::cgtp_naive ? cgtp_naive_flops(t.j1, t.j2, t.j3)
                                          : cgtp_sparse_flops(t.j1, t.j2, t.j3);
      }
      return n;
    }
    case Method::cgtp_vstp_sim: return sim_projection(setting, L);
    default: break;
  }
  std::mt19937_64 rng(0);
  const auto c = grid_cell(setting, L, spin_of(method, opt), rng, true);
  return istp_flops(c.x, c.y, c.s3, c.L3);
}

BenchRecord run_cell(Method method, Setting setting, int L, const BenchOptions& opt) {
  if (opt.repeats < 1) throw std::invalid_argument("run_cell: repeats must be >= 1");
  BenchRecord rec{method, setting, L, 0, 0.0, opt.repeats};
  std::vector<double> times;
  for (int r = 0; r < opt.repeats; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    const std::uint64_t flops = execute(method, setting, L, opt);
    const auto t1 = std::chrono::steady_clock::now();
    if (r > 0 && flops != rec.flops) throw std::logic_error("run_cell: flop count changed between repeats");
    rec.flops = flops;
    times.push_back(std::chrono::duration<double>(t1 - t0).count());
  }
  rec.walltime_s = median(times);
  return rec;
}

std::vector<BenchRecord> run_bench(Method method, Setting setting, const std::vector<int>& L_list,
                                   const BenchOptions& opt, std::vector<std::string>* skipped) {
  for (std::size_t i = 1; i < L_list.size(); ++i) {
    if (L_list[i] <= L_list[i - 1]) throw std::invalid_argument("run_bench: L list must be strictly ascending");
  }
  std::vector<BenchRecord> out;
  for (int L : L_list) {
    const std::uint64_t projected = projected_flops(method, setting, L, opt);
    if (projected > opt.flop_budget) {
      if (skipped) {
        skipped->push_back(to_string(method) + " " + to_string(setting) + " L=" + std::to_string(L) +
                           ": projected " + std::to_string(projected) + " MACs exceeds budget " +
                           std::to_string(opt.flop_budget));
      }
      continue;
    }
    out.push_back(run_cell(method, setting, L, opt));
  }
  return out;
}

SlopeFit fit_slope(const std::vector<BenchRecord>& records, std::size_t min_points) {
  if (records.size() < min_points) {
    throw std::invalid_argument("fit_slope: need at least " + std::to_string(min_points) + " records");
  }
  std::set<int> distinct;
  double sx = 0, sy = 0;
  const double n = static_cast<double>(records.size());
  SlopeFit fit;
  fit.L_min = records.front().L;
  fit.L_max = records.front().L;
  for (const auto& r : records) {
    if (r.flops == 0 || r.L <= 0) throw std::invalid_argument("fit_slope: flops and L must be positive");
    distinct.insert(r.L);
    fit.L_min = std::min(fit.L_min, r.L);
    fit.L_max = std::max(fit.L_max, r.L);
    sx += std::log(static_cast<double>(r.L));
    sy += std::log(static_cast<double>(r.flops));
  }
  if (distinct.size() < 2) throw std::invalid_argument("fit_slope: degenerate L range");
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0, syy = 0;
  for (const auto& r : records) {
    const double dx = std::log(static_cast<double>(r.L)) - mx;
    const double dy = std::log(static_cast<double>(r.flops)) - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r2 = syy == 0.0 ? 1.0 : std::clamp(sxy * sxy / (sxx * syy), 0.0, 1.0);
  return fit;
}

void write_csv(const std::vector<BenchRecord>& records, std::ostream& out) {
  if (records.empty()) throw std::invalid_argument("write_csv: no records");
  out << "method,setting,L,flops,walltime_s,repeats\n";
  for (const auto& r : records) {
    out << to_string(r.method) << ',' << to_string(r.setting) << ',' << r.L << ',' << r.flops << ','
        << fmt17(r.walltime_s) << ',' << r.repeats << '\n';
  }
}

std::vector<BenchRecord> read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "method,setting,L,flops,walltime_s,repeats") {
    throw std::invalid_argument("read_csv: missing or unexpected header");
  }
  std::vector<BenchRecord> out;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != 6) throw std::invalid_argument("read_csv: line " + std::to_string(lineno) + " has " +
                                                   std::to_string(f.size()) + " fields");
    BenchRecord r;
    r.method = parse_method(f[0]);
    r.setting = parse_setting(f[1]);
    r.L = std::stoi(f[2]);
    r.flops = std::stoull(f[3]);
    r.walltime_s = std::strtod(f[4].c_str(), nullptr);
    r.repeats = std::stoi(f[5]);
    out.push_back(r);
  }
  return out;
}

void emit_csv(const std::vector<BenchRecord>& records, const std::filesystem::path& path) {
  if (records.empty()) throw std::invalid_argument("emit_csv: no records");
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("emit_csv: cannot open " + path.string());
  write_csv(records, f);
  if (!f) throw std::runtime_error("emit_csv: write failed for " + path.string());
}

std::vector<BenchRecord> parse_csv_file(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("parse_csv_file: cannot open " + path.string());
  return read_csv(f);
}

void emit_svg(const std::vector<BenchRecord>& records, const std::filesystem::path& path) {
  if (records.empty()) throw std::invalid_argument("emit_svg: no records");
  std::map<std::string, std::vector<const BenchRecord*>> series;
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (const auto& r : records) {
    if (r.L <= 0 || r.flops == 0) continue;
    series[to_string(r.method) + " " + to_string(r.setting)].push_back(&r);
    const double x = std::log10(r.L), y = std::log10(static_cast<double>(r.flops));
    xmin = std::min(xmin, x), xmax = std::max(xmax, x);
    ymin = std::min(ymin, y), ymax = std::max(ymax, y);
  }
  if (series.empty()) throw std::invalid_argument("emit_svg: nothing plottable (need L > 0, flops > 0)");
  if (xmax - xmin < 1e-9) xmin -= 0.5, xmax += 0.5;
  ymin = std::floor(ymin), ymax = std::ceil(ymax);
  if (ymax - ymin < 1) ymax = ymin + 1;

  const double W = 800, H = 500, left = 80, right = 220, top = 30, bottom = 60;
  auto px = [&](double x) { return left + (x - xmin) / (xmax - xmin) * (W - left - right); };
  auto py = [&](double y) { return H - bottom - (y - ymin) / (ymax - ymin) * (H - top - bottom); };
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2"};

  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("emit_svg: cannot open " + path.string());
  f << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
    << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  f << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  f << "<line x1=\"" << left << "\" y1=\"" << H - bottom << "\" x2=\"" << W - right << "\" y2=\"" << H - bottom
    << "\" stroke=\"black\"/>\n";
  f << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\"" << H - bottom
    << "\" stroke=\"black\"/>\n";
  for (int d = static_cast<int>(ymin); d <= static_cast<int>(ymax); ++d) {
    f << "<text x=\"" << left - 8 << "\" y=\"" << py(d) + 4 << "\" text-anchor=\"end\">1e" << d << "</text>\n";
  }
  std::set<int> ls;
  for (const auto& r : records) {
    if (r.L > 0) ls.insert(r.L);
  }
  for (int L : ls) {
    f << "<text x=\"" << px(std::log10(L)) << "\" y=\"" << H - bottom + 18 << "\" text-anchor=\"middle\">" << L
      << "</text>\n";
  }
  f << "<text x=\"" << (left + W - right) / 2 << "\" y=\"" << H - 15 << "\" text-anchor=\"middle\">L</text>\n";
  f << "<text x=\"20\" y=\"" << (top + H - bottom) / 2 << "\" transform=\"rotate(-90 20 " << (top + H - bottom) / 2
    << ")\" text-anchor=\"middle\">complex MACs</text>\n";

  int k = 0;
  for (const auto& [name, pts] : series) {
    const char* color = colors[k % 7];
    f << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
    for (const auto* r : pts) {
      f << px(std::log10(r->L)) << ',' << py(std::log10(static_cast<double>(r->flops))) << ' ';
    }
    f << "\"/>\n";
    std::string label = name;
    if (pts.size() >= 2) {
      std::vector<BenchRecord> rs;
      for (const auto* r : pts) rs.push_back(*r);
      char buf[32];
      std::snprintf(buf, sizeof buf, " (slope %.2f)", fit_slope(rs, 2).slope);
      label += buf;
    }
    const double ly = top + 18.0 * k;
    f << "<line x1=\"" << W - right + 10 << "\" y1=\"" << ly << "\" x2=\"" << W - right + 30 << "\" y2=\"" << ly
      << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    f << "<text x=\"" << W - right + 35 << "\" y=\"" << ly + 4 << "\">" << label << "</text>\n";
    ++k;
  }
  f << "</svg>\n";
  if (!f) throw std::runtime_error("emit_svg: write failed for " + path.string());
}

}  // namespace sphtp
