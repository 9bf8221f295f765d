//
// Copyright 2026 The dpfix Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

// Python bindings for the core dpfix operations.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dpfix/admm.h"
#include "dpfix/errors.h"
#include "dpfix/experiment.h"
#include "dpfix/fixed_point.h"
#include "dpfix/lasso.h"
#include "dpfix/operators.h"
#include "dpfix/privacy.h"
#include "dpfix/utility.h"

namespace py = pybind11;

namespace dpfix {
namespace {

DenseMatrix ToMatrix(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) return {};
  DenseMatrix m(rows.size(), rows.front().size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != m.cols()) ThrowStructural("ragged matrix rows");
    for (std::size_t c = 0; c < m.cols(); ++c) m(r, c) = rows[r][c];
  }
  return m;
}

std::vector<std::vector<double>> FromMatrix(const DenseMatrix& m) {
  std::vector<std::vector<double>> rows(m.rows());
  for (std::size_t r = 0; r < m.rows(); ++r) {
    rows[r].assign(m.row(r).begin(), m.row(r).end());
  }
  return rows;
}

LassoDataset ToDataset(const std::vector<std::vector<double>>& a,
                       const Vec& b) {
  LassoDataset data;
  data.a = ToMatrix(a);
  data.b = b;
  if (data.b.size() != data.a.rows()) {
    ThrowStructural("A and b disagree on the number of rows");
  }
  return data;
}

}  // namespace
}  // namespace dpfix

PYBIND11_MODULE(_core, m) {
  using namespace dpfix;
  m.doc() = "Differentially private fixed-point optimization";

  static py::exception<Error> error(m, "Error", PyExc_RuntimeError);
  static py::exception<ConditionNotMet> condition(m, "ConditionNotMet",
                                                  error.ptr());
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const ConditionNotMet& e) {
      PyErr_SetString(condition.ptr(), e.what());
    } catch (const Error& e) {
      const std::string msg =
          "[" + std::string(CategoryName(e.category())) + "] " + e.what();
      PyErr_SetString(error.ptr(), msg.c_str());
    }
  });

  // Operators.
  m.def("prox_l1", [](const Vec& v, double t) { return ProxL1(v, t); },
        py::arg("v"), py::arg("threshold"));
  m.def("prox_quadratic_rank_one",
        [](const Vec& a, double b, double gamma, double n, const Vec& v) {
          return ProxQuadraticRankOne(a, b, gamma, n, v);
        },
        py::arg("a"), py::arg("b"), py::arg("gamma"), py::arg("n"),
        py::arg("v"));
  m.def("clip", [](const Vec& v, double c) { return Clip(v, c); },
        py::arg("v"), py::arg("c"));

  // Privacy accountant.
  m.def("default_alpha_grid", &DefaultAlphaGrid);
  m.def("gaussian_rdp", &GaussianRdp, py::arg("sensitivity"),
        py::arg("sigma"), py::arg("alpha"));
  m.def("sensitivity_consensus", &SensitivityConsensus, py::arg("L"),
        py::arg("gamma"), py::arg("lam"), py::arg("n"));
  m.def("centralized_epsilon", &CentralizedEpsilon, py::arg("alpha"),
        py::arg("K"), py::arg("L"), py::arg("gamma"), py::arg("sigma"),
        py::arg("n"));
  m.def("subsampled_rdp", &SubsampledRdp, py::arg("alpha"), py::arg("q"),
        py::arg("sensitivity"), py::arg("sigma"));
  m.def("federated_central_epsilon", &FederatedCentralEpsilon,
        py::arg("alpha"), py::arg("K"), py::arg("L"), py::arg("gamma"),
        py::arg("sigma"), py::arg("m"), py::arg("n"),
        py::arg("secure_agg") = false);
  m.def("local_epsilon", &LocalEpsilon, py::arg("alpha"), py::arg("K_i"),
        py::arg("L"), py::arg("gamma"), py::arg("sigma"));
  m.def("network_rdp_epsilon", &NetworkRdpEpsilon, py::arg("alpha"),
        py::arg("K_i"), py::arg("L"), py::arg("gamma"), py::arg("sigma"),
        py::arg("n"));
  m.def("amplification_by_iteration", &AmplificationByIteration,
        py::arg("displacement"), py::arg("steps"), py::arg("sigma"),
        py::arg("alpha"));
  m.def("network_amplification_sum", &NetworkAmplificationSum, py::arg("n"),
        py::arg("horizon"));
  m.def("rdp_to_dp",
        [](const std::vector<double>& alphas, const std::vector<double>& eps,
           double delta) {
          if (alphas.size() != eps.size()) {
            ThrowStructural("alphas and epsilons differ in length");
          }
          RdpCurve curve(alphas);
          for (std::size_t i = 0; i < eps.size(); ++i) curve.Set(i, eps[i], "");
          const DpGuarantee g = RdpToDp(curve, delta);
          return py::make_tuple(g.epsilon, g.alpha);
        },
        py::arg("alphas"), py::arg("epsilons"), py::arg("delta"));
  m.def("calibrate_sigma",
        [](const std::string& setting, double epsilon, double delta,
           double K, double L, double gamma, std::size_t n, std::size_t m_users,
           std::optional<double> k_i) {
          AccountingParams p;
          p.iterations = K;
          p.lipschitz = L;
          p.gamma = gamma;
          p.n = n;
          p.m = m_users;
          p.participations =
              k_i ? *k_i
                  : static_cast<double>(EstimateParticipations(
                        static_cast<std::size_t>(K), n));
          return CalibrateSigma(DpTarget{epsilon, delta},
                                ParsePrivacySetting(setting), p);
        },
        py::arg("setting"), py::arg("epsilon"), py::arg("delta"), py::arg("K"),
        py::arg("L"), py::arg("gamma"), py::arg("n"), py::arg("m") = 1,
        py::arg("K_i") = py::none());

  // Utility bounds.
  m.def("utility_bound",
        [](double tau, double q, double sigma, double zeta, std::size_t p,
           double d, std::size_t k) {
          const UtilityBound b =
              EvaluateUtilityBound({tau, q, sigma, zeta, p, d, k});
          return py::make_tuple(b.transient, b.floor);
        },
        py::arg("tau"), py::arg("q"), py::arg("sigma"), py::arg("zeta"),
        py::arg("p"), py::arg("D"), py::arg("k"));
  m.def("chi_at_optimum", &ChiAtOptimum, py::arg("tau"), py::arg("q"),
        py::arg("c"));
  m.def("optimal_lambda", &OptimalLambda, py::arg("tau"), py::arg("q"),
        py::arg("c"));

  // Lasso benchmark.
  m.def("gen_lasso",
        [](std::size_t n, std::size_t p, std::size_t support, double noise_std,
           std::uint64_t seed) {
          const LassoDataset d = GenLasso(n, p, support, noise_std, seed);
          return py::make_tuple(FromMatrix(d.a), d.b, d.x_true);
        },
        py::arg("n"), py::arg("p"), py::arg("support"),
        py::arg("noise_std") = 0.1, py::arg("seed") = 0);
  m.def("lasso_objective",
        [](const std::vector<std::vector<double>>& a, const Vec& b,
           const Vec& x, double kappa) {
          return LassoObjective(ToDataset(a, b), x, kappa);
        },
        py::arg("A"), py::arg("b"), py::arg("x"), py::arg("kappa"));
  m.def("lasso_reference",
        [](const std::vector<std::vector<double>>& a, const Vec& b,
           double kappa) {
          return SolveLassoReference(ToDataset(a, b), kappa).x;
        },
        py::arg("A"), py::arg("b"), py::arg("kappa"));
  m.def("admm_lasso",
        [](const std::vector<std::vector<double>>& a, const Vec& b,
           double kappa, double gamma, double lam, double sigma, std::size_t K,
           std::uint64_t seed, std::optional<double> clip,
           const std::string& setting, std::size_t users_per_round) {
          const LassoDataset data = ToDataset(a, b);
          const ConsensusProblem problem =
              MakeLassoConsensus(data, kappa, gamma, clip);
          const BlockVector u0(problem.n, problem.p);
          AdmmRunConfig run{lam, sigma, K, seed};
          const Deployment d = ParseDeployment(setting);
          if (d == Deployment::kFederated) {
            return FederatedRun(problem, u0, run, users_per_round).z;
          }
          if (d == Deployment::kDecentralized) {
            return DecentralizedRun(problem, u0, run).z;
          }
          return CentralizedRun(problem, u0, run).z;
        },
        py::arg("A"), py::arg("b"), py::arg("kappa"), py::arg("gamma"),
        py::arg("lam") = 1.0, py::arg("sigma") = 0.0, py::arg("K") = 100,
        py::arg("seed") = 0, py::arg("clip") = py::none(),
        py::arg("setting") = "centralized", py::arg("users_per_round") = 1);
  m.def("dpsgd_lasso",
        [](const std::vector<std::vector<double>>& a, const Vec& b,
           double kappa, double step, std::optional<double> clip, double sigma,
           std::size_t K, std::size_t batch, std::uint64_t seed) {
          DpsgdConfig c;
          c.step = step;
          c.clip = clip;
          c.sigma = sigma;
          c.iterations = K;
          c.batch = batch;
          c.kappa = kappa;
          c.seed = seed;
          return DpsgdBaseline(ToDataset(a, b), c);
        },
        py::arg("A"), py::arg("b"), py::arg("kappa"), py::arg("step"),
        py::arg("clip") = py::none(), py::arg("sigma") = 0.0,
        py::arg("K") = 100, py::arg("batch") = 1, py::arg("seed") = 0);
}
