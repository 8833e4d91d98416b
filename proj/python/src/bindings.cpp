// Python extension: thin wrappers over the core library. Rationals cross the
// boundary as (numerator, denominator) pairs; the package turns them into
// fractions.Fraction.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <map>
#include <optional>

#include "nbattack/error.hpp"
#include "nbattack/exact.hpp"
#include "nbattack/experiment.hpp"
#include "nbattack/normdist.hpp"
#include "nbattack/observables.hpp"
#include "nbattack/stein.hpp"
#include "nbattack/version.hpp"

namespace py = pybind11;
using namespace nbattack;

namespace {

using RationalPair = std::pair<std::int64_t, std::int64_t>;

RationalPair pair_of(const Rational& q) { return {q.num(), q.den()}; }

SpinState to_state(const std::vector<int>& values) {
  std::vector<std::int8_t> v(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] != 1 && values[i] != -1) throw Error(ErrorCode::invalid_params, "spin values must be +1 or -1");
    v[i] = static_cast<std::int8_t>(values[i]);
  }
  return SpinState(std::move(v));
}

FamilySpec make_spec(const std::string& kind, int size, const std::vector<int>& offsets) {
  FamilySpec spec;
  spec.kind = parse_family(kind);
  spec = spec.with_size(size);
  spec.offsets = offsets;
  return spec;
}

void check_state(const Graph& g, const SpinState& s) {
  if (s.size() != g.size()) throw Error(ErrorCode::invalid_params, "state length differs from the node count");
}

struct PyGraph {
  FamilySpec spec;
  Graph graph;
  NeighborhoodIndex index;
};

PyGraph make_graph(const std::string& kind, int size, const std::vector<int>& offsets) {
  FamilySpec spec = make_spec(kind, size, offsets);
  Graph g = build_family(spec);
  NeighborhoodIndex idx = build_neighborhood_index(g);
  return {std::move(spec), std::move(g), std::move(idx)};
}

py::dict estimates_dict(const EstimateReport& e) {
  py::dict d;
  d["count"] = e.count;
  d["mean_y"] = e.mean_y;
  d["var_y_hat"] = e.var_y_hat;
  d["cov_eta_theta_hat"] = e.cov_eta_theta_hat;
  d["var_cond_m2_hat"] = e.var_cond_m2_hat;
  d["se_mean_y"] = e.se_mean_y;
  d["se_var_y"] = e.se_var_y;
  d["se_cov_eta_theta"] = e.se_cov_eta_theta;
  d["se_var_cond_m2"] = e.se_var_cond_m2;
  d["lag1_autocorr_y"] = e.lag1_autocorr_y;
  d["batches"] = e.batches;
  d["se_method"] = e.se_method;
  return d;
}

py::dict terms_dict(const BoundTerms& t) {
  py::dict d;
  d["variance_term"] = t.variance_term;
  d["cubic_term"] = t.cubic_term;
  d["square_term"] = t.square_term;
  d["total"] = t.total();
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Neighborhood Attack voter model core";
  m.attr("__version__") = kVersion;

  static py::exception<Error> error_type(m, "NbattackError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object exc = py::reinterpret_borrow<py::object>(error_type.ptr())(e.what());
      exc.attr("code") = std::string(to_string(e.code()));
      PyErr_SetObject(error_type.ptr(), exc.ptr());
    }
  });

  py::class_<PyGraph>(m, "Graph")
      .def(py::init(&make_graph), py::arg("kind"), py::arg("size"), py::arg("offsets") = std::vector<int>{})
      .def_property_readonly("n", [](const PyGraph& g) { return g.graph.size(); })
      .def_property_readonly("r", [](const PyGraph& g) { return g.graph.degree(); })
      .def_property_readonly("r_star", [](const PyGraph& g) { return g.index.r_star; })
      .def_property_readonly("label", [](const PyGraph& g) { return g.spec.label(); })
      .def_property_readonly("near_pairs", [](const PyGraph& g) { return g.index.near_pairs; })
      .def("neighbors",
           [](const PyGraph& g, int k) {
             if (k < 0 || k >= g.graph.size()) throw py::index_error("node out of range");
             auto nb = g.graph.neighbors(k);
             return std::vector<int>(nb.begin(), nb.end());
           })
      .def("__repr__", [](const PyGraph& g) { return "<Graph " + g.spec.label() + ">"; });

  m.def(
      "step",
      [](const PyGraph& g, const std::vector<int>& state, int coin, int node) {
        SpinState s = to_state(state);
        check_state(g.graph, s);
        if (coin != 1 && coin != -1) throw Error(ErrorCode::invalid_params, "coin must be +1 or -1");
        if (node < 0 || node >= g.graph.size()) throw py::index_error("node out of range");
        const StepRecord rec = step(g.graph, s, coin, node);
        return py::make_tuple(std::vector<int>(s.values().begin(), s.values().end()), rec.delta_y);
      },
      py::arg("graph"), py::arg("state"), py::arg("coin"), py::arg("node"));

  m.def(
      "q_profile",
      [](const PyGraph& g, const std::vector<int>& state) {
        const SpinState s = to_state(state);
        check_state(g.graph, s);
        const QProfile q = q_profile(g.graph, s);
        std::map<int, std::int64_t> out;
        for (int i : q.support()) out[i] = q.count(i);
        return out;
      },
      py::arg("graph"), py::arg("state"));

  m.def(
      "_delta_y_pmf",
      [](const PyGraph& g, const std::vector<int>& state, RationalPair p) {
        const SpinState s = to_state(state);
        check_state(g.graph, s);
        std::map<int, RationalPair> out;
        for (const auto& [v, w] : delta_y_pmf(q_profile(g.graph, s), Rational(p.first, p.second))) out[v] = pair_of(w);
        return out;
      },
      py::arg("graph"), py::arg("state"), py::arg("p"));

  m.def("_cond_moments", [](const PyGraph& g, const std::vector<int>& state) {
    const SpinState s = to_state(state);
    check_state(g.graph, s);
    const QProfile q = q_profile(g.graph, s);
    return py::make_tuple(pair_of(cond_mean_delta_y(q)), pair_of(cond_second_moment_delta_y(q)));
  });

  m.def(
      "pair_counts",
      [](const PyGraph& g, const std::vector<int>& state) {
        const SpinState s = to_state(state);
        check_state(g.graph, s);
        const PairCounts pc = pair_counts(g.index, s);
        py::dict d;
        d["alpha"] = pc.alpha;
        d["beta"] = pc.beta;
        d["eta"] = pc.eta;
        d["theta"] = pc.theta;
        return d;
      },
      py::arg("graph"), py::arg("state"));

  m.def(
      "simulate",
      [](const PyGraph& g, double p, std::uint64_t seed, std::uint64_t samples, std::uint32_t replicas,
         std::optional<std::uint64_t> burn_in, std::optional<std::uint64_t> thinning) {
        ChainConfig cfg{p, seed, burn_in.value_or(default_burn_in(g.graph.size())),
                        thinning.value_or(default_thinning(g.graph.size())), samples, replicas};
        SimulationResult sim;
        {
          py::gil_scoped_release release;
          sim = simulate_chain(g.graph, g.index, cfg, {false, 0});
        }
        py::dict d = estimates_dict(sim.estimates);
        d["node_sums"] = sim.node_sums;
        return d;
      },
      py::arg("graph"), py::arg("p") = 0.5, py::arg("seed") = 0, py::arg("samples") = 10000, py::arg("replicas") = 1,
      py::arg("burn_in") = py::none(), py::arg("thinning") = py::none());

  m.def(
      "solve_exact",
      [](const PyGraph& g, double p, int cap) {
        const ExactSolution sol = solve_exact(g.graph, g.index, p, cap);
        const ExactReport& r = sol.report;
        py::dict d;
        d["class_size"] = r.class_size;
        d["solver"] = sol.distribution.method;
        d["residual"] = sol.distribution.residual;
        d["flip_asymmetry"] = flip_asymmetry(sol.distribution);
        d["mean_y"] = r.mean_y;
        d["var_y"] = r.var_y;
        d["cov_eta_theta"] = r.cov_eta_theta;
        d["mean_m2"] = r.mean_m2;
        d["var_m2_state"] = r.var_m2_state;
        d["var_m2_ylevel"] = r.var_m2_ylevel;
        d["var_square_sum"] = r.var_square_sum;
        d["var_pair_route"] = r.var_pair_route;
        if (p == 0.5) {
          d["linearity_max_abs_deviation"] = sol.linearity.max_abs_deviation;
          d["linearity_exact"] = sol.linearity.exact_identity_holds;
        }
        std::map<std::uint64_t, double> pi;
        for (std::uint32_t x : sol.distribution.recurrent_class) pi[x] = sol.distribution.pi[x];
        d["pi"] = pi;
        return d;
      },
      py::arg("graph"), py::arg("p") = 0.5, py::arg("cap") = kDefaultStateCap);

  m.def(
      "fkg_violations",
      [](const PyGraph& g, std::size_t limit, int cap) {
        const StationaryDistribution dist = stationary(build_transition(g.graph, 0.5, cap));
        const FkgReport rep = fkg_violations(dist, limit);
        py::list found;
        for (const auto& v : rep.violations) found.append(py::make_tuple(v.x, v.y, v.meet, v.join));
        py::dict d;
        d["exhaustive"] = rep.exhaustive;
        d["pairs_examined"] = rep.pairs_examined;
        d["violations_found"] = rep.violations_found;
        d["violations"] = found;
        return d;
      },
      py::arg("graph"), py::arg("limit") = 100, py::arg("cap") = kDefaultStateCap);

  m.def("_stein_lambda", [](int r, long long n) { return pair_of(stein_lambda(r, n)); });
  m.def("_sigma2_bounds", [](int r, long long n) {
    const Sigma2Bracket b = sigma2_bounds(r, n);
    return py::make_tuple(pair_of(b.lower), pair_of(b.upper));
  });
  m.def("rollin_bound", [](double lambda, double a, double v) { return terms_dict(rollin_bound(lambda, a, v)); },
        py::arg("lam"), py::arg("a"), py::arg("var_term"));
  m.def("assembled_bound",
        [](int r, double n, double sigma2, double v) { return terms_dict(assembled_bound(r, n, sigma2, v)); },
        py::arg("r"), py::arg("n"), py::arg("sigma2"), py::arg("var_term"));
  m.def(
      "theorem_bound",
      [](int r, int r_star, double n, const std::string& variant) {
        if (variant != "r_star" && variant != "r_squared") {
          throw Error(ErrorCode::invalid_params, "variant must be 'r_star' or 'r_squared'");
        }
        return theorem_bound(r, r_star, n, variant == "r_star" ? TheoremVariant::r_star : TheoremVariant::r_squared);
      },
      py::arg("r"), py::arg("r_star"), py::arg("n"), py::arg("variant") = "r_star");

  m.def("std_normal_cdf", &std_normal_cdf, py::arg("x"));
  m.def("std_normal_pdf", &std_normal_pdf, py::arg("x"));
  m.def("std_normal_quantile", &std_normal_quantile, py::arg("u"));
  m.def("wasserstein1_to_normal", [](std::vector<double> xs) { return wasserstein1_to_normal(Sample(std::move(xs))); },
        py::arg("sample"));
  m.def("kolmogorov_to_normal", [](std::vector<double> xs) { return kolmogorov_to_normal(Sample(std::move(xs))); },
        py::arg("sample"));
}
