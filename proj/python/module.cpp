#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "aspinn/adam.hpp"
#include "aspinn/errors.hpp"
#include "aspinn/net.hpp"
#include "aspinn/oracle_fd.hpp"
#include "aspinn/partition.hpp"
#include "aspinn/problems.hpp"
#include "aspinn/schwarz.hpp"

namespace py = pybind11;
using namespace aspinn;

namespace {

// python-side points are plain (x,) / (x, y) tuples
Point to_point(const std::vector<double>& coords) {
  Point p{0.0, 0.0};
  for (std::size_t a = 0; a < std::min<std::size_t>(coords.size(), 2); ++a)
    p[a] = coords[a];
  return p;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Overlapping Schwarz iterations over sine-network collocation "
            "solvers for Poisson problems";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<ContractError>(m, "ContractError", PyExc_RuntimeError);

  py::class_<MlpNet>(m, "MlpNet")
      .def(py::init<>())
      .def_readwrite("input_dim", &MlpNet::input_dim)
      .def_readwrite("hidden_width", &MlpNet::hidden_width)
      .def_readwrite("w1", &MlpNet::w1)
      .def_readwrite("b1", &MlpNet::b1)
      .def_readwrite("w2", &MlpNet::w2)
      .def_readwrite("b2", &MlpNet::b2)
      .def("parameter_count", &MlpNet::parameter_count)
      .def("flatten", &MlpNet::flatten);

  m.def("init_net", &init_net, py::arg("seed"), py::arg("input_dim"),
        py::arg("hidden_width"));
  m.def("evaluate",
        [](const MlpNet& net, const std::vector<double>& x) {
          return evaluate(net, to_point(x));
        },
        py::arg("net"), py::arg("x"));
  m.def("laplacian",
        [](const MlpNet& net, const std::vector<double>& x) {
          return laplacian(net, to_point(x));
        },
        py::arg("net"), py::arg("x"));

  py::class_<CollocationBatch>(m, "CollocationBatch")
      .def(py::init<>())
      .def_readwrite("interior", &CollocationBatch::interior)
      .def_readwrite("interior_rhs", &CollocationBatch::interior_rhs)
      .def_readwrite("interior_rhs_offset", &CollocationBatch::interior_rhs_offset)
      .def_readwrite("boundary", &CollocationBatch::boundary)
      .def_readwrite("boundary_target", &CollocationBatch::boundary_target);

  m.def("loss_value", &loss_value, py::arg("net"), py::arg("batch"));
  m.def("loss_and_grad",
        [](const MlpNet& net, const CollocationBatch& batch) {
          const LossGrad lg = loss_and_grad(net, batch);
          return py::make_tuple(lg.loss, lg.grad);
        },
        py::arg("net"), py::arg("batch"));
  m.def("train",
        [](const MlpNet& net, const CollocationBatch& batch, int epochs,
           std::uint64_t seed) {
          TrainResult res = train(net, batch, epochs, seed);
          return py::make_tuple(res.net, res.loss_history);
        },
        py::arg("net"), py::arg("batch"), py::arg("epochs"), py::arg("seed") = 0);

  py::class_<Box>(m, "Box")
      .def_readonly("lo", &Box::lo)
      .def_readonly("hi", &Box::hi)
      .def_readonly("dim", &Box::dim);

  py::class_<PoissonProblem>(m, "PoissonProblem")
      .def_readonly("id", &PoissonProblem::id)
      .def_readonly("dim", &PoissonProblem::dim)
      .def_readonly("domain", &PoissonProblem::domain)
      .def("f", [](const PoissonProblem& p, const std::vector<double>& x) {
        return p.f(to_point(x));
      })
      .def("g", [](const PoissonProblem& p, const std::vector<double>& x) {
        return p.g(to_point(x));
      })
      .def("exact", [](const PoissonProblem& p, const std::vector<double>& x) {
        return p.exact(to_point(x));
      });

  m.def("problem_by_id", &problem_by_id, py::arg("id"), py::arg("A") = 100.0,
        py::arg("eps") = 0.05);

  py::class_<OverlapPartition>(m, "OverlapPartition")
      .def_readonly("dim", &OverlapPartition::dim)
      .def_readonly("per_axis", &OverlapPartition::per_axis)
      .def_readonly("H", &OverlapPartition::H)
      .def_readonly("delta", &OverlapPartition::delta)
      .def_readonly("Nc", &OverlapPartition::Nc)
      .def_readonly("boxes", &OverlapPartition::boxes)
      .def("count", &OverlapPartition::count)
      .def("owners", [](const OverlapPartition& p, const std::vector<double>& x) {
        return p.owners(to_point(x));
      });

  m.def("build_partition",
        [](const PoissonProblem& problem, int per_axis, double overlap_ratio) {
          return build_partition(problem.domain, per_axis, overlap_ratio);
        },
        py::arg("problem"), py::arg("per_axis"), py::arg("overlap_ratio"));

  py::class_<TrainingSets>(m, "TrainingSets")
      .def_readonly("interior", &TrainingSets::interior)
      .def_readonly("boundary", &TrainingSets::boundary)
      .def_readonly("coarse_interior", &TrainingSets::coarse_interior)
      .def_readonly("coarse_boundary", &TrainingSets::coarse_boundary)
      .def_readonly("seed", &TrainingSets::seed);

  m.def("sample_training_sets", &sample_training_sets, py::arg("partition"),
        py::arg("problem"), py::arg("interior_per_sub"), py::arg("boundary_per_sub"),
        py::arg("coarse_interior") = 0, py::arg("coarse_boundary") = 0,
        py::arg("seed") = 0);

  py::enum_<Level>(m, "Level")
      .value("one", Level::one)
      .value("two", Level::two);

  py::class_<SchwarzConfig>(m, "SchwarzConfig")
      .def(py::init<>())
      .def_readwrite("level", &SchwarzConfig::level)
      .def_readwrite("tau", &SchwarzConfig::tau)
      .def_readwrite("max_outer", &SchwarzConfig::max_outer)
      .def_readwrite("epochs_per_solve", &SchwarzConfig::epochs_per_solve)
      .def_readwrite("coarse_epochs", &SchwarzConfig::coarse_epochs)
      .def_readwrite("local_width", &SchwarzConfig::local_width)
      .def_readwrite("coarse_width", &SchwarzConfig::coarse_width)
      .def_readwrite("warm_start", &SchwarzConfig::warm_start)
      .def_readwrite("eval_grid", &SchwarzConfig::eval_grid)
      .def_readwrite("stop_tol", &SchwarzConfig::stop_tol);

  py::class_<SchwarzState>(m, "SchwarzState")
      .def_readonly("local_nets", &SchwarzState::local_nets)
      .def_readonly("coarse_net", &SchwarzState::coarse_net)
      .def("uhat", [](const SchwarzState& state, const std::vector<double>& x) {
        return evaluate_uhat(state, to_point(x));
      });

  py::class_<IterationRecord>(m, "IterationRecord")
      .def_readonly("iter", &IterationRecord::iter)
      .def_readonly("rel_l2", &IterationRecord::rel_l2)
      .def_readonly("mean_local_loss", &IterationRecord::mean_local_loss)
      .def_readonly("coarse_loss", &IterationRecord::coarse_loss);

  py::class_<RunReport>(m, "RunReport")
      .def_readonly("history", &RunReport::history)
      .def_readonly("wall_seconds", &RunReport::wall_seconds)
      .def_readonly("state", &RunReport::state);

  m.def("run_schwarz", &run, py::arg("problem"), py::arg("partition"),
        py::arg("sets"), py::arg("config"), py::arg("seed") = 0, py::arg("jobs") = 1,
        py::call_guard<py::gil_scoped_release>());

  m.def("relative_l2_error",
        [](const std::function<double(const std::vector<double>&)>& uhat,
           const PoissonProblem& problem, int grid) {
          return relative_l2_error(
              [&uhat, &problem](const Point& x) {
                std::vector<double> coords(x.begin(), x.begin() + problem.dim);
                return uhat(coords);
              },
              problem, grid);
        },
        py::arg("uhat"), py::arg("problem"), py::arg("grid_per_axis") = 0);

  // grid-based rate oracle
  py::class_<OracleHistory>(m, "OracleHistory")
      .def_readonly("energy_error", &OracleHistory::energy_error)
      .def_readonly("ratio", &OracleHistory::ratio);

  m.def("fd_solve",
        [](const PoissonProblem& problem, int nodes_per_axis) {
          const FdGrid grid = make_grid(problem.domain, nodes_per_axis);
          return fd_solve(problem, grid);
        },
        py::arg("problem"), py::arg("nodes_per_axis"));
  m.def("fd_schwarz_run",
        [](const PoissonProblem& problem, int per_axis, double overlap_ratio,
           int nodes_per_axis, double tau, int iterations, Level level,
           int coarse_nodes) {
          const OverlapPartition partition =
              build_partition(problem.domain, per_axis, overlap_ratio);
          const FdGrid grid = make_grid(problem.domain, nodes_per_axis);
          return fd_schwarz_run(problem, partition, grid, tau, iterations, level,
                                coarse_nodes);
        },
        py::arg("problem"), py::arg("per_axis"), py::arg("overlap_ratio"),
        py::arg("nodes_per_axis"), py::arg("tau"), py::arg("iterations"),
        py::arg("level") = Level::one, py::arg("coarse_nodes") = 0,
        py::call_guard<py::gil_scoped_release>());
  m.def("asymptotic_ratio", &asymptotic_ratio, py::arg("history"),
        py::arg("tail") = 10);
  m.def("rate_bound",
        [](double C0, int Nc, double tau) { return rate_bound({C0, Nc, tau}); },
        py::arg("C0"), py::arg("Nc"), py::arg("tau"));
  m.def("optimal_tau",
        [](double C0, int Nc) {
          const OptimalTau best = optimal_tau(C0, Nc);
          return py::make_tuple(best.tau, best.min_rate);
        },
        py::arg("C0"), py::arg("Nc"));

#ifdef VERSION_INFO
  m.attr("__version__") = VERSION_INFO;
#else
  m.attr("__version__") = "0.1.0";
#endif
}
