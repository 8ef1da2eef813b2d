#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "entangle/bell.hpp"
#include "entangle/collective.hpp"
#include "entangle/errors.hpp"
#include "entangle/optimizer.hpp"
#include "entangle/separability.hpp"
#include "entangle/states.hpp"

namespace py = pybind11;
using namespace entangle;

namespace {

using ComplexArray = py::array_t<Complex, py::array::c_style | py::array::forcecast>;
using RealArray = py::array_t<double, py::array::c_style | py::array::forcecast>;

ComplexArray to_numpy(const ComplexMatrix& m) {
  ComplexArray out({m.rows(), m.cols()});
  auto view = out.mutable_unchecked<2>();
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) view(i, j) = m(i, j);
  return out;
}

RealArray to_numpy(const RealVector& v) {
  RealArray out(static_cast<py::ssize_t>(v.size()));
  std::copy(v.begin(), v.end(), out.mutable_data());
  return out;
}

ComplexMatrix from_numpy(const ComplexArray& a) {
  if (a.ndim() != 2) throw InvalidArgument("expected a 2-d array");
  const auto view = a.unchecked<2>();
  ComplexMatrix m(a.shape(0), a.shape(1));
  for (py::ssize_t i = 0; i < a.shape(0); ++i)
    for (py::ssize_t j = 0; j < a.shape(1); ++j) m(i, j) = view(i, j);
  return m;
}

RealVector from_numpy(const RealArray& a) {
  if (a.ndim() != 1) throw InvalidArgument("expected a 1-d array");
  return RealVector(a.data(), a.data() + a.size());
}

BipartiteState make_state(const ComplexArray& rho, std::pair<std::size_t, std::size_t> dims) {
  return {dims.first, dims.second, from_numpy(rho)};
}

std::size_t pair_count(std::size_t len) {
  std::size_t n = 0;
  while ((std::size_t{1} << n) < len) ++n;
  return n;
}

FilterRows make_rows(const RealArray& r0, const RealArray& r1) {
  FilterRows rows{0, from_numpy(r0), from_numpy(r1)};
  rows.n = pair_count(rows.u0.size());
  return rows;
}

py::tuple rows_tuple(const FilterRows& r) { return py::make_tuple(to_numpy(r.u0), to_numpy(r.u1)); }

py::dict correlation_dict(const CorrelationMatrix& c) {
  RealArray t({3, 3});
  auto view = t.mutable_unchecked<2>();
  for (std::size_t p = 0; p < 3; ++p)
    for (std::size_t q = 0; q < 3; ++q) view(p, q) = c.t[p][q];
  py::dict d;
  d["t"] = t;
  d["m_value"] = c.m_value;
  d["chsh_max"] = c.chsh_max;
  return d;
}

Strategy parse_strategy(const std::string& s) {
  if (s == "xor") return Strategy::Xor;
  if (s == "chad") return Strategy::ControlledHadamard;
  if (s == "optimize") return Strategy::Optimize;
  throw InvalidArgument("strategy must be xor, chad or optimize");
}

OptimizerConfig make_config(std::size_t restarts, std::uint64_t seed, std::size_t threads) {
  OptimizerConfig cfg;
  cfg.restarts = restarts;
  cfg.base_seed = seed;
  cfg.threads = threads;
  return cfg;
}

}  // namespace

PYBIND11_MODULE(_entangle, m) {
  m.doc() = "Separability criteria, CHSH maxima and collective postselection on Werner pairs";

  // Subclasses (InvalidState, ZeroProbability, ...) map onto their base.
  py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
  py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);

  m.def("werner_state", [](double x) { return to_numpy(werner_state({x}).rho()); }, py::arg("x"));
  m.def(
      "gisin_state",
      [](double x, Complex a, Complex b) { return to_numpy(gisin_state({x, a, b}).rho()); },
      py::arg("x"), py::arg("a"), py::arg("b"));
  m.def("singlet_plus_polarized", [](double x) { return to_numpy(singlet_plus_polarized(x).rho()); },
        py::arg("x"));

  m.def(
      "partial_transpose",
      [](const ComplexArray& rho, std::pair<std::size_t, std::size_t> dims) {
        return to_numpy(partial_transpose(make_state(rho, dims)));
      },
      py::arg("rho"), py::arg("dims") = std::pair<std::size_t, std::size_t>{2, 2});

  m.def(
      "ppt_check",
      [](const ComplexArray& rho, std::pair<std::size_t, std::size_t> dims) {
        const auto r = ppt_check(make_state(rho, dims));
        py::dict d;
        d["eigenvalues"] = to_numpy(r.eigenvalues);
        d["min_eigenvalue"] = r.min_eigenvalue;
        d["is_ppt"] = r.is_ppt;
        d["conclusive"] = ppt_is_conclusive(dims.first, dims.second);
        return d;
      },
      py::arg("rho"), py::arg("dims") = std::pair<std::size_t, std::size_t>{2, 2});

  m.def(
      "alpha2_check",
      [](const ComplexArray& rho, std::pair<std::size_t, std::size_t> dims) {
        const auto r = alpha2_check(make_state(rho, dims));
        py::dict d;
        d["purity"] = r.purity;
        d["purity_a"] = r.purity_a;
        d["purity_b"] = r.purity_b;
        d["flags_inseparable"] = r.flags_inseparable;
        return d;
      },
      py::arg("rho"), py::arg("dims") = std::pair<std::size_t, std::size_t>{2, 2});

  m.def(
      "t_matrix", [](const ComplexArray& rho) { return correlation_dict(t_matrix(make_state(rho, {2, 2}))); },
      py::arg("rho"));

  m.def(
      "optimal_settings",
      [](const ComplexArray& rho) {
        const auto s = optimal_settings(make_state(rho, {2, 2}));
        py::dict d;
        d["a"] = s.a;
        d["a_prime"] = s.a_prime;
        d["b"] = s.b;
        d["b_prime"] = s.b_prime;
        return d;
      },
      py::arg("rho"));

  m.def("xor_rows", [](std::size_t n) { return rows_tuple(xor_rows(n)); }, py::arg("n"));
  m.def("controlled_hadamard_rows", [] { return rows_tuple(controlled_hadamard_rows()); });
  m.def(
      "v_from_u", [](const RealArray& u0, const RealArray& u1) { return rows_tuple(v_from_u(make_rows(u0, u1))); },
      py::arg("u0"), py::arg("u1"));

  m.def(
      "postselect",
      [](const ComplexArray& rho_pair, std::size_t n, const RealArray& u0, const RealArray& u1,
         std::optional<RealArray> v0, std::optional<RealArray> v1) {
        const auto u = make_rows(u0, u1);
        if (v0.has_value() != v1.has_value()) throw InvalidArgument("give both v0 and v1 or neither");
        const auto v = v0 ? make_rows(*v0, *v1) : v_from_u(u);
        const auto r = postselect(make_state(rho_pair, {2, 2}), n, u, v);
        return py::make_tuple(to_numpy(r.rho_new.rho()), r.success_probability);
      },
      py::arg("rho_pair"), py::arg("n"), py::arg("u0"), py::arg("u1"), py::arg("v0") = py::none(),
      py::arg("v1") = py::none(),
      "Filter n copies of a pair; Bob's rows default to the sign-tied rows from u. Returns (rho_new, p).");

  m.def(
      "optimize",
      [](std::size_t n, double x, std::size_t restarts, std::uint64_t seed, std::size_t threads) {
        OptimumReport r;
        {
          py::gil_scoped_release release;
          r = optimize(n, x, make_config(restarts, seed, threads));
        }
        py::dict d;
        d["n"] = r.n;
        d["x"] = r.x;
        d["best_rows"] = rows_tuple(r.best_rows);
        d["best_chsh"] = r.best_chsh;
        d["best_m"] = r.best_m;
        d["success_probability"] = r.success_probability;
        d["restarts_converged"] = r.restarts_converged;
        d["distinct_local_maxima"] = r.distinct_local_maxima;
        return d;
      },
      py::arg("n"), py::arg("x"), py::arg("restarts") = 64, py::arg("seed") = 0, py::arg("threads") = 1);

  m.def(
      "scan",
      [](std::vector<std::size_t> n_list, std::vector<double> x_grid, const std::string& strategy,
         std::size_t restarts, std::uint64_t seed) {
        std::vector<ScanRecord> recs;
        {
          py::gil_scoped_release release;
          recs = scan(std::move(n_list), std::move(x_grid), make_config(restarts, seed, 1),
                      parse_strategy(strategy));
        }
        py::list out;
        for (const auto& r : recs) {
          py::dict d;
          d["n"] = r.n;
          d["x"] = r.x;
          d["strategy"] = r.strategy;
          d["chsh_max"] = r.chsh_max;
          d["success_probability"] = r.success_probability;
          out.append(d);
        }
        return out;
      },
      py::arg("n_list"), py::arg("x_grid"), py::arg("strategy") = "optimize", py::arg("restarts") = 64,
      py::arg("seed") = 0);
}
