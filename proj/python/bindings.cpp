#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "sphtp/bench.hpp"
#include "sphtp/coeff_io.hpp"
#include "sphtp/errors.hpp"
#include "sphtp/rules.hpp"
#include "sphtp/tenprod.hpp"
#include "sphtp/verify.hpp"

namespace py = pybind11;
using namespace sphtp;

namespace {

NineJKey to_key(const std::array<int, 9>& g) { return NineJKey{g}; }

PathKey to_path(const std::array<int, 9>& g) {
  return {g[0], g[1], g[2], g[3], g[4], g[5], g[6], g[7], g[8]};
}

CgtpMode parse_mode(const std::string& m) {
  if (m == "naive") return CgtpMode::naive;
  if (m == "sparse") return CgtpMode::sparse;
  throw std::invalid_argument("mode must be 'naive' or 'sparse'");
}

std::string inverse(const std::string& text, int Lg) {
  const auto doc = nlohmann::json::parse(text);
  if (json_spin(doc) == 0) {
    const IrrepCoeffs x = irrep_from_json(doc);
    return canonical_json(samples_to_json(to_sphere(x, make_grid(Lg < 0 ? x.L : Lg)), x.L));
  }
  const TshCoeffs x = tsh_from_json(doc);
  const int g = Lg < 0 ? x.L() : Lg;
  if (g < x.L()) throw PreconditionError("grid band limit Lg is below L");
  return canonical_json(samples_to_json(tsh_encode(x, make_grid(g)), x.L()));
}

std::string forward(const std::string& text, int L) {
  int file_L = 0;
  const SpinSignal f = samples_from_json(nlohmann::json::parse(text), &file_L);
  if (L < 0) L = file_L;
  if (f.s == 0) return canonical_json(to_json(from_sphere(to_scalar_signal(f), L)));
  return canonical_json(to_json(tsh_decode(f, L)));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "sphtp core bindings";

  py::register_exception<PreconditionError>(m, "PreconditionError", PyExc_ValueError);
  py::register_exception<TriangleViolation>(m, "TriangleViolation", PyExc_ValueError);
  py::register_exception<NotInteractable>(m, "NotInteractable", PyExc_ValueError);
  py::register_exception<SchemaError>(m, "SchemaError", PyExc_ValueError);

  m.def("cg", [](int j1, int m1, int j2, int m2, int j3, int m3) { return cg_value({j1, m1, j2, m2, j3, m3}); },
        py::arg("j1"), py::arg("m1"), py::arg("j2"), py::arg("m2"), py::arg("j3"), py::arg("m3"),
        "Clebsch-Gordan coefficient C^{j3,m3}_{j1,m1,j2,m2}.");
  m.def("cg_exact",
        [](int j1, int m1, int j2, int m2, int j3, int m3) { return cg({j1, m1, j2, m2, j3, m3}).to_string(); },
        "Exact form sign*sqrt(p/q).");
  m.def("wigner_9j", [](const std::array<int, 9>& g) { return wigner_9j(to_key(g)).to_double(); },
        py::arg("grid"), "9j symbol of a row-major 3x3 grid.");
  m.def("wigner_9j_exact", [](const std::array<int, 9>& g) { return wigner_9j(to_key(g)).to_string(); });
  m.def("wigner_d", [](int j, double a, double b, double g) { return wigner_d_matrix(j, a, b, g); },
        py::arg("j"), py::arg("alpha"), py::arg("beta"), py::arg("gamma"),
        "D^j_{mn}, rows and columns ordered m = -j..j.");
  m.def("sh", &sh_eval, py::arg("l"), py::arg("m"), py::arg("theta"), py::arg("phi"));

  m.def("cgtp_path",
        [](const Eigen::VectorXcd& x, const Eigen::VectorXcd& y, int j3, const std::string& mode) {
          std::uint64_t flops = 0;
          auto z = cgtp_path(x, y, j3, parse_mode(mode), &flops);
          return py::make_tuple(z, flops);
        },
        py::arg("x"), py::arg("y"), py::arg("j3"), py::arg("mode") = "sparse",
        "Returns (z, flops).");
  m.def("simulate_cgtp_path",
        [](const Eigen::VectorXcd& x, const Eigen::VectorXcd& y, int j3) {
          std::uint64_t flops = 0;
          auto z = simulate_cgtp_path(x, y, j3, nullptr, &flops);
          return py::make_tuple(z, flops);
        },
        py::arg("x"), py::arg("y"), py::arg("j3"));

  m.def("generalized_gaunt", [](const std::array<int, 9>& p) { return generalized_gaunt(to_path(p)); },
        py::arg("path"), "Coefficient for (j1,l1,s1, j2,l2,s2, j3,l3,s3).");
  m.def("vstp_rules",
        [](int j1, int l1, int j2, int l2, int j3, int l3) {
          const RuleReport r = vstp_rules(PathKey::vector(j1, l1, j2, l2, j3, l3));
          py::dict d;
          d["passed"] = r.passed;
          d["rules"] = std::vector<bool>(r.rule.begin(), r.rule.end());
          d["coefficient"] = r.coefficient;
          return d;
        });
  m.def("find_valid_ells", &find_valid_ells);
  m.def("expressivity_count", &expressivity_count, py::arg("s"), py::arg("L"));
  m.def("projected_flops",
        [](const std::string& method, const std::string& setting, int L) {
          return projected_flops(parse_method(method), parse_setting(setting), L);
        });

  m.def("transform_inverse", &inverse);
  m.def("transform_forward", &forward);
  m.def("verify", [](const std::string& level, const std::string& filter, std::uint64_t seed, double tol) {
    VerifyConfig cfg;
    if (level == "quick") cfg.level = VerifyLevel::quick;
    else if (level == "full") cfg.level = VerifyLevel::full;
    else throw std::invalid_argument("level must be 'quick' or 'full'");
    cfg.seed = seed;
    cfg.tolerance = tol;
    py::gil_scoped_release release;
    return report_json(run_verify(cfg, filter));
  });
}
