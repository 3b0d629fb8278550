#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "tracesum/amplifier.hpp"
#include "tracesum/bilinear.hpp"
#include "tracesum/charsums.hpp"
#include "tracesum/errors.hpp"
#include "tracesum/heckecoef.hpp"
#include "tracesum/modarith.hpp"
#include "tracesum/periodic.hpp"
#include "tracesum/sums.hpp"
#include "tracesum/tracefn.hpp"

namespace py = pybind11;
using namespace tracesum;

PYBIND11_MODULE(_core, m) {
  m.attr("__version__") = TRACESUM_VERSION;

  static py::exception<Error> error(m, "Error");
  static py::exception<InputError> input_error(m, "InputError", error.ptr());
  static py::exception<VerificationError> verification_error(m, "VerificationError", error.ptr());
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const InputError& e) {
      py::set_error(input_error, e.what());
    } catch (const VerificationError& e) {
      py::set_error(verification_error, e.what());
    } catch (const Error& e) {
      py::set_error(error, e.what());
    }
  });

  m.def("mod_inverse", &mod_inverse, py::arg("x"), py::arg("m"));

  py::class_<PeriodicFunction>(m, "PeriodicFunction")
      .def(py::init<int64_t, std::vector<cplx>>(), py::arg("q"), py::arg("values"))
      .def_property_readonly("modulus", &PeriodicFunction::modulus)
      .def("values", [](const PeriodicFunction& K) {
        const auto v = K.values();
        return std::vector<cplx>(v.begin(), v.end());
      })
      .def("__call__", &PeriodicFunction::operator())
      .def("__len__", &PeriodicFunction::modulus)
      .def("fourier", [](const PeriodicFunction& K) { return K.fourier(); })
      .def("norm2_squared", &PeriodicFunction::norm2_squared)
      .def("sup_norm", &PeriodicFunction::sup_norm);
  m.def("dft", &dft);

  m.def(
      "build_trace", [](const std::string& text, int64_t q) { return build(parse_trace_spec(text, q)); },
      py::arg("spec"), py::arg("q"), "Trace function from its command-line form, e.g. 'kl2' or 'legendre'.");
  m.def("kloosterman", &kloosterman, py::arg("n"), py::arg("m"));
  m.def("hyper_kloosterman", &hyper_kloosterman, py::arg("q"), py::arg("rank"));
  m.def("gauss_sums", &gauss_sums, py::arg("q"));
  m.def("mellin_transform", &mellin_transform, py::arg("K"));
  m.def(
      "kl3_twist",
      [](const PeriodicFunction& K, double tol) {
        const auto t = kl3_twist(K, tol);
        return py::make_tuple(t.direct, t.gauss_form, t.defect);
      },
      py::arg("K"), py::arg("tol") = 1e-8);

  py::class_<HeckeSystem>(m, "HeckeSystem")
      .def(py::init([](int64_t limit) { return HeckeSystem::from_environment(limit); }), py::arg("limit"))
      .def_property_readonly("limit", &HeckeSystem::limit)
      .def("tau", [](const HeckeSystem& H, int64_t n) { return py::int_(py::str(to_string(H.tau(n)))); })
      .def("lambda_", &HeckeSystem::lambda, py::arg("n"))
      .def("lambda_1n", &HeckeSystem::lambda_1n, py::arg("n"))
      .def("satake", &HeckeSystem::satake, py::arg("p"));
  m.def("gl3_coefficient", &gl3_coefficient, py::arg("m"), py::arg("n"), py::arg("H"));
  m.def(
      "verify_identities",
      [](const HeckeSystem& H, int64_t N, double tol) {
        const auto r = verify_identities(H, N, tol);
        py::dict d;
        d["checked"] = r.checked;
        d["convolution_defect"] = r.convolution_defect;
        d["square_defect"] = r.square_defect;
        d["mobius_defect"] = r.mobius_defect;
        d["kim_sarnak_max"] = r.kim_sarnak_max;
        return d;
      },
      py::arg("H"), py::arg("N"), py::arg("tol") = 1e-9);

  m.def(
      "bilinear_form",
      [](std::vector<cplx> alpha, std::vector<cplx> beta, const PeriodicFunction& K, double tol) {
        const auto v = bilinear_form({std::move(alpha), std::move(beta), K}, tol);
        return py::make_tuple(v.direct, v.spectral, v.defect);
      },
      py::arg("alpha"), py::arg("beta"), py::arg("K"), py::arg("tol") = 1e-8);
  m.def(
      "bound_ratio",
      [](std::vector<cplx> alpha, std::vector<cplx> beta, const PeriodicFunction& K) {
        return bound_ratio({std::move(alpha), std::move(beta), K});
      },
      py::arg("alpha"), py::arg("beta"), py::arg("K"));

  m.def(
      "c_sum",
      [](int64_t n, int64_t p1, int64_t p2, int64_t l1, int64_t l2, int64_t r, int64_t mm, int64_t q) {
        return c_sum(CInstance{n, p1, p2, l1, l2, r, mm, q});
      },
      py::arg("n"), py::arg("p1"), py::arg("p2"), py::arg("l1"), py::arg("l2"), py::arg("r"), py::arg("m"),
      py::arg("q"));

  py::class_<SmoothWindow>(m, "SmoothWindow")
      .def(py::init<double, double>(), py::arg("Z"), py::arg("scale") = 1.0)
      .def("__call__", &SmoothWindow::operator())
      .def("derivative", &SmoothWindow::derivative, py::arg("x"), py::arg("order"))
      .def("fourier", &SmoothWindow::fourier, py::arg("y"), py::arg("tol") = 1e-12)
      .def("mass", &SmoothWindow::mass);
  m.def(
      "s_v",
      [](const PeriodicFunction& K, const HeckeSystem& H, const SmoothWindow& V, double X, const std::string& coeff) {
        return s_v(K, H, V, X, parse_coefficient(coeff));
      },
      py::arg("K"), py::arg("H"), py::arg("V"), py::arg("X"), py::arg("coefficient") = "gl3");
  m.def(
      "poisson_check",
      [](const PeriodicFunction& K, const SmoothWindow& V, double X) {
        const auto c = poisson_check(K, V, X);
        return py::make_tuple(c.lhs, c.rhs, c.defect);
      },
      py::arg("K"), py::arg("V"), py::arg("X"));
  m.def(
      "corollary_sums",
      [](const PeriodicFunction& K, const HeckeSystem& H, const SmoothWindow& V, double X) {
        const auto c = corollary_sums(K, H, V, X);
        py::dict d;
        d["c15"] = c.c15;
        d["c15_mobius"] = c.c15_mobius;
        d["c16"] = c.c16;
        d["c16_mobius"] = c.c16_mobius;
        d["c15_defect"] = c.c15_defect;
        d["c16_defect"] = c.c16_defect;
        return d;
      },
      py::arg("K"), py::arg("H"), py::arg("V"), py::arg("X"));

  py::class_<AmplifierFamily>(m, "AmplifierFamily")
      .def(py::init<PeriodicFunction>(), py::arg("K"))
      .def("__call__", [](const AmplifierFamily& F, int64_t n, int64_t h) { return family_value(F, n, h); });
  py::class_<PrimePairMeasure>(m, "PrimePairMeasure")
      .def_readonly("P", &PrimePairMeasure::P)
      .def_readonly("L", &PrimePairMeasure::L)
      .def_readonly("p_set", &PrimePairMeasure::p_set)
      .def_readonly("l_set", &PrimePairMeasure::l_set);
  m.def("prime_pair_measure", &prime_pair_measure, py::arg("P"), py::arg("L"), py::arg("q"));
  m.def("measure_average", &measure_average, py::arg("F"), py::arg("M"), py::arg("n"), py::arg("h"));
  m.def(
      "decompose_fo",
      [](const PeriodicFunction& K, const HeckeSystem& H, const SmoothWindow& V, double X, const PrimePairMeasure& M,
         double Hparam, int64_t hmax, double tol) {
        const auto d = decompose_FO(K, H, V, X, M, Hparam, hmax, tol);
        py::dict out;
        out["F"] = d.F;
        out["O"] = d.O;
        out["S"] = d.S;
        out["T"] = d.T;
        out["defect"] = d.defect;
        out["hmax"] = d.hmax;
        return out;
      },
      py::arg("K"), py::arg("H"), py::arg("V"), py::arg("X"), py::arg("M"), py::arg("H_param"), py::arg("hmax") = 0,
      py::arg("tol") = 1e-8);
}
