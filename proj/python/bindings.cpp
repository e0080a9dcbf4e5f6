#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qb/bergman.hpp"
#include "qb/group_action.hpp"
#include "qb/isotypic.hpp"
#include "qb/quadrature.hpp"
#include "qb/quotient.hpp"
#include "qb/smith.hpp"
#include "qb/verify.hpp"

namespace py = pybind11;
using namespace qb;

namespace {

std::vector<std::vector<int>> index_lists(const std::vector<MultiIndex>& v) {
  std::vector<std::vector<int>> out;
  for (const auto& m : v) out.push_back(m.to_vector());
  return out;
}

MixedSymbol as_symbol(const py::object& o, std::size_t dim) {
  if (py::isinstance<MixedSymbol>(o)) return o.cast<MixedSymbol>();
  return parse_symbol(o.cast<std::string>(), dim);
}

py::dict operator_dict(const TruncatedOperator& op) {
  py::dict d;
  d["matrix"] = op.matrix;
  d["index_map"] = index_lists(op.index_map);
  d["truncation"] = op.truncation;
  d["band_margin"] = op.band_margin;
  return d;
}

}  // namespace

PYBIND11_MODULE(_qbergman, m) {
  m.doc() = "Weighted Bergman spaces, reflection groups and Toeplitz operators on quotient domains";

  py::register_exception<Error>(m, "QbError", PyExc_ValueError);

  py::class_<ReflectionGroup>(m, "ReflectionGroup")
      .def_static("symmetric", &ReflectionGroup::symmetric, py::arg("d"))
      .def_static("cyclic_diagonal", [](const std::vector<int>& orders) { return ReflectionGroup::cyclic_diagonal(orders); },
                  py::arg("orders"))
      .def_static("from_spec", [](const std::string& s) { return group_from_spec(s); }, py::arg("spec"))
      .def_property_readonly("order", &ReflectionGroup::order)
      .def_property_readonly("dimension", &ReflectionGroup::dimension)
      .def_property_readonly("label", &ReflectionGroup::label)
      .def("characters",
           [](const ReflectionGroup& g) {
             std::vector<std::string> out;
             for (const auto& chi : one_dim_characters(g)) out.push_back(chi.label);
             return out;
           })
      .def("basic_map",
           [](const ReflectionGroup& g) {
             std::vector<std::string> out;
             for (const auto& c : basic_map(g).components) out.push_back(c.to_string());
             return out;
           })
      .def("basic_degrees", [](const ReflectionGroup& g) { return basic_degrees(g); })
      .def("__repr__", [](const ReflectionGroup& g) { return "<ReflectionGroup " + g.label() + ">"; });

  m.def("invariant_dimension", &invariant_dimension, py::arg("group"), py::arg("n"));
  m.def("completeness_defect", &completeness_defect, py::arg("group"), py::arg("n"));

  py::class_<MixedSymbol>(m, "Symbol")
      .def(py::init([](const std::string& text, std::size_t dim) { return parse_symbol(text, dim); }), py::arg("text"),
           py::arg("dim"))
      .def_property_readonly("dim", &MixedSymbol::dim)
      .def("__call__", [](const MixedSymbol& u, const Point& z) { return u.evaluate(z); })
      .def("is_holomorphic", &MixedSymbol::is_holomorphic)
      .def("is_pluriharmonic", &MixedSymbol::is_pluriharmonic)
      .def("conjugate", &MixedSymbol::conjugate)
      .def("band_margin", &MixedSymbol::band_margin)
      .def(py::self + py::self)
      .def(py::self - py::self)
      .def(py::self * py::self)
      .def("__str__", &MixedSymbol::to_string)
      .def("__repr__", [](const MixedSymbol& u) { return "<Symbol " + u.to_string() + ">"; });

  py::class_<Weight>(m, "Weight")
      .def_static("polydisc", &Weight::polydisc, py::arg("alpha"))
      .def_static("ball", &Weight::ball, py::arg("d"))
      .def_readonly("dim", &Weight::dim)
      .def_readonly("alpha", &Weight::alpha)
      .def_property_readonly("label", &Weight::label)
      .def("__repr__", [](const Weight& w) { return "<Weight " + w.label() + ">"; });

  m.def(
      "monomial_norm_sq",
      [](const std::vector<int>& exps, const Weight& w) { return monomial_norm_sq(MultiIndex(std::span<const int>(exps)), w); },
      py::arg("exponents"), py::arg("weight"));
  m.def("kernel_eval", [](const Weight& w, const Point& z, const Point& y) { return kernel_eval(w, z, y); },
        py::arg("weight"), py::arg("z"), py::arg("y"));
  m.def("kernel_series", [](const Weight& w, const Point& z, const Point& y, int n) { return kernel_series(w, z, y, n); },
        py::arg("weight"), py::arg("z"), py::arg("y"), py::arg("n"));

  m.def(
      "toeplitz_matrix",
      [](const py::object& u, const Weight& w, int n) { return operator_dict(toeplitz_matrix(as_symbol(u, w.dim), w, n)); },
      py::arg("symbol"), py::arg("weight"), py::arg("n"));

  m.def(
      "berezin",
      [](const Weight& w, const py::object& f, const Point& z, int radial, int angular) {
        auto r = berezin(w, as_symbol(f, w.dim), z, {radial, angular});
        return py::make_tuple(r.value, r.error_estimate, r.warning);
      },
      py::arg("weight"), py::arg("symbol"), py::arg("z"), py::arg("radial") = 64, py::arg("angular") = 128);

  m.def(
      "quadrature_integral",
      [](const std::function<cplx(Point)>& f, const Weight& w, int radial, int angular) {
        QuadratureRule rule(w, {radial, angular});
        Point z(w.dim);
        cplx sum{};
        for (std::size_t i = 0; i < rule.size(); ++i) {
          const double wt = rule.node(i, z);
          sum += wt * f(z);
        }
        return sum;
      },
      py::arg("f"), py::arg("weight"), py::arg("radial") = 16, py::arg("angular") = 32);

  m.def(
      "smith_normal_form",
      [](const IntMatrix& a) {
        auto s = smith_normal_form(a);
        return py::make_tuple(s.P, s.D, s.Q);
      },
      py::arg("a"));

  m.def(
      "isotypic_basis",
      [](const ReflectionGroup& g, const std::string& character, const std::vector<double>& alpha, int n) {
        auto q = QuotientDescriptor::make(g, character_by_label(g, character), Weight::polydisc(alpha));
        auto b = isotypic_basis(q, n);
        py::dict d;
        d["labels"] = index_lists(b.labels);
        std::vector<std::string> vecs;
        for (const auto& v : b.vectors) vecs.push_back(v.to_string());
        d["vectors"] = vecs;
        return d;
      },
      py::arg("group"), py::arg("character"), py::arg("alpha"), py::arg("n"));

  m.def(
      "compressed_toeplitz",
      [](const ReflectionGroup& g, const std::string& character, const std::vector<double>& alpha, const py::object& u,
         int n) {
        auto q = QuotientDescriptor::make(g, character_by_label(g, character), Weight::polydisc(alpha));
        auto lifted = compose_map(as_symbol(u, g.dimension()), q.theta);
        return operator_dict(compressed_toeplitz(q, isotypic_basis(q, n), lifted));
      },
      py::arg("group"), py::arg("character"), py::arg("alpha"), py::arg("symbol"), py::arg("n"),
      "Compression of T_{u o theta} to the isotypic component; u is given in quotient variables.");

  m.def(
      "transfer_check",
      [](const ReflectionGroup& g, const py::object& u, const py::object& v, const py::object& q,
         const std::string& mode, int n, const std::vector<double>& alpha) {
        const std::size_t d = g.dimension();
        const MixedSymbol us = as_symbol(u, d), vs = as_symbol(v, d);
        const TransferMode tm = mode == "commutator" ? TransferMode::commutator : TransferMode::product;
        if (mode != "product" && mode != "commutator") throw Error(ErrorCode::usage, "mode must be product or commutator");
        MixedSymbol qs = q.is_none() ? (tm == TransferMode::product ? us * vs : MixedSymbol(d)) : as_symbol(q, d);
        std::vector<double> a = alpha.empty() ? std::vector<double>(d, 0.0) : alpha;
        return transfer_check(g, Weight::polydisc(a), us, vs, qs, tm, n).to_json().dump();
      },
      py::arg("group"), py::arg("u"), py::arg("v"), py::arg("q") = py::none(), py::arg("mode") = "product",
      py::arg("n") = 8, py::arg("alpha") = std::vector<double>{});

  m.def(
      "run_experiment_json",
      [](const std::string& config) {
        auto cfgs = parse_config(nlohmann::json::parse(config));
        std::vector<Report> reports;
        {
          py::gil_scoped_release release;
          reports = run_batch(cfgs);
        }
        nlohmann::json out = nlohmann::json::array();
        for (const auto& r : reports) out.push_back(r.to_json());
        return out.dump();
      },
      py::arg("config"));

  m.def(
      "format_reports_json",
      [](const std::string& config, const std::string& fmt) {
        auto cfgs = parse_config(nlohmann::json::parse(config));
        std::vector<Report> reports;
        {
          py::gil_scoped_release release;
          reports = run_batch(cfgs);
        }
        return format_reports(reports, report_format_from_string(fmt));
      },
      py::arg("config"), py::arg("fmt"));
}
