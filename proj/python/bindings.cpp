#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "blocknem/blockmodel.hpp"
#include "blocknem/fitmetrics.hpp"
#include "blocknem/harness.hpp"
#include "blocknem/mechanisms.hpp"
#include "blocknem/nem.hpp"
#include "blocknem/network.hpp"
#include "blocknem/network_io.hpp"
#include "blocknem/plot.hpp"
#include "blocknem/rng.hpp"

namespace py = pybind11;
using namespace blocknem;

namespace {

BinaryNetwork network_from_numpy(py::array_t<double, py::array::c_style | py::array::forcecast> a,
                                 bool directed) {
    if (a.ndim() != 2 || a.shape(0) != a.shape(1))
        throw std::invalid_argument("adjacency must be a square 2-d array");
    const int n = static_cast<int>(a.shape(0));
    std::vector<std::uint8_t> cells(static_cast<std::size_t>(n) * n, 0);
    auto view = a.unchecked<2>();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const double v = view(i, j);
            if (v != 0.0 && v != 1.0) throw std::invalid_argument("entries must be 0 or 1");
            cells[static_cast<std::size_t>(i) * n + j] = v != 0.0 ? 1 : 0;
        }
    return BinaryNetwork::from_cells(n, directed, std::move(cells));
}

py::array_t<std::uint8_t> network_to_numpy(const BinaryNetwork& net) {
    const int n = net.size();
    py::array_t<std::uint8_t> out({n, n});
    auto view = out.mutable_unchecked<2>();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) view(i, j) = net.has_link(i, j) && i != j ? 1 : 0;
    return out;
}

CountNetwork counts_from_numpy(py::array_t<long long, py::array::c_style | py::array::forcecast> a) {
    if (a.ndim() != 2 || a.shape(0) != a.shape(1))
        throw std::invalid_argument("counts must be a square 2-d array");
    const int n = static_cast<int>(a.shape(0));
    std::vector<long long> cells(static_cast<std::size_t>(n) * n, 0);
    auto view = a.unchecked<2>();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) cells[static_cast<std::size_t>(i) * n + j] = view(i, j);
    return CountNetwork::from_cells(n, std::move(cells));
}

MechanismWeights weights_from_sequence(const std::array<double, kMechanismCount>& w) {
    return MechanismWeights::from_array(w);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Blockmodeling and mechanism-driven generation of binary networks";

    py::class_<Rng>(m, "Rng")
        .def(py::init<std::uint64_t>(), py::arg("seed"))
        .def("uniform01", &Rng::uniform01)
        .def("uniform_int", &Rng::uniform_int, py::arg("bound"))
        .def("normal", &Rng::normal);

    py::class_<BinaryNetwork>(m, "Network")
        .def(py::init<int, bool>(), py::arg("n"), py::arg("directed"))
        .def_static("from_numpy", &network_from_numpy, py::arg("adjacency"), py::arg("directed"))
        .def("to_numpy", &network_to_numpy)
        .def_property_readonly("n", &BinaryNetwork::size)
        .def_property_readonly("directed", &BinaryNetwork::directed)
        .def("has_link", &BinaryNetwork::has_link, py::arg("i"), py::arg("j"))
        .def("set_link", &BinaryNetwork::set_link, py::arg("i"), py::arg("j"), py::arg("present"))
        .def("link_count", &BinaryNetwork::link_count)
        .def("density", &BinaryNetwork::density)
        .def("degrees",
             [](const BinaryNetwork& net) {
                 const Degrees d = net.degrees();
                 return py::make_tuple(d.in, d.out);
             })
        .def("__eq__", [](const BinaryNetwork& a, const BinaryNetwork& b) { return a == b; });

    m.def("binarize",
          [](py::array_t<long long, py::array::c_style | py::array::forcecast> counts) {
              return binarize(counts_from_numpy(counts));
          },
          py::arg("counts"), "Symmetrize interaction counts and threshold at half the pair median.");
    m.def("symmetrize_union", &symmetrize_union, py::arg("net"));

    py::class_<MechanismWeights>(m, "MechanismWeights")
        .def(py::init(&weights_from_sequence), py::arg("weights"))
        .def_readwrite("mutuality", &MechanismWeights::mutuality)
        .def_readwrite("popularity", &MechanismWeights::popularity)
        .def_readwrite("assortativity", &MechanismWeights::assortativity)
        .def_readwrite("transitivity", &MechanismWeights::transitivity)
        .def_readwrite("osp", &MechanismWeights::osp)
        .def("as_array", &MechanismWeights::as_array);

    m.def("sample_theta", &sample_theta, py::arg("rng"));
    m.def("normalize_theta", &normalize_theta, py::arg("raw"));

    m.def("mechanism_stats",
          [](const BinaryNetwork& net, int focal) {
              const MechanismStats s = mechanism_stats(net, focal);
              py::dict raw, normalized;
              const char* names[kMechanismCount] = {"mutuality", "popularity", "assortativity",
                                                    "transitivity", "osp"};
              for (int m_i = 0; m_i < kMechanismCount; ++m_i) {
                  raw[names[m_i]] = s.raw[m_i];
                  normalized[names[m_i]] = s.normalized[m_i];
              }
              py::dict out;
              out["focal"] = s.focal;
              out["candidates"] = s.candidates;
              out["raw"] = raw;
              out["normalized"] = normalized;
              return out;
          },
          py::arg("net"), py::arg("focal"));
    m.def("phi", &phi, py::arg("net"), py::arg("focal"), py::arg("theta"));

    m.def("geometric_checkpoints",
          [](long long m1, double growth, long long total) {
              return geometric_checkpoints(m1, growth, total).points;
          },
          py::arg("m1"), py::arg("growth"), py::arg("total"));
    m.def("default_full_checkpoints", [] { return default_full_checkpoints(); });

    m.def("nem_step", &nem_step, py::arg("net"), py::arg("theta"), py::arg("q"), py::arg("rng"));
    m.def("generate",
          [](int n, double q, long long iterations, const MechanismWeights& theta,
             const std::vector<long long>& checkpoints, std::uint64_t seed) {
              GeneratorConfig config{q, iterations, n, seed};
              const CheckpointSchedule schedule = resolve_checkpoints(iterations, checkpoints);
              const BinaryNetwork initial(n, true);
              GenerateResult result = generate(config, theta, schedule, initial);
              py::list snaps;
              for (Snapshot& s : result.snapshots)
                  snaps.append(py::make_tuple(s.iteration, std::move(s.network)));
              return py::make_tuple(snaps, std::move(result.final_network));
          },
          py::arg("n"), py::arg("q"), py::arg("iterations"), py::arg("theta"),
          py::arg("checkpoints") = std::vector<long long>{}, py::arg("seed") = 1,
          "Run a trajectory from the empty directed network; returns (snapshots, final).");

    py::class_<Partition>(m, "Partition")
        .def(py::init([](std::vector<int> labels, int k) {
                 Partition p{std::move(labels), k};
                 p.validate();
                 return p;
             }),
             py::arg("labels"), py::arg("k"))
        .def_readonly("labels", &Partition::labels)
        .def_readonly("k", &Partition::k)
        .def("same_up_to_relabeling", &Partition::same_up_to_relabeling, py::arg("other"));

    py::class_<BlockImage>(m, "BlockImage")
        .def(py::init([](const std::vector<std::vector<std::string>>& rows) {
                 const int k = static_cast<int>(rows.size());
                 BlockImage image(k, BlockType::Null);
                 for (int g = 0; g < k; ++g) {
                     if (static_cast<int>(rows[g].size()) != k)
                         throw std::invalid_argument("image must be square");
                     for (int h = 0; h < k; ++h)
                         image.set(g, h, block_type_from_name(rows[g][h]));
                 }
                 return image;
             }),
             py::arg("rows"))
        .def_readonly("k", &BlockImage::k)
        .def("rows",
             [](const BlockImage& image) {
                 std::vector<std::vector<std::string>> rows(image.k);
                 for (int g = 0; g < image.k; ++g)
                     for (int h = 0; h < image.k; ++h)
                         rows[g].push_back(block_type_name(image.at(g, h)));
                 return rows;
             })
        .def("__eq__", [](const BlockImage& a, const BlockImage& b) { return a == b; });

    m.def("fit_blockmodel",
          [](const BinaryNetwork& net, int k, int restarts, std::uint64_t seed,
             const std::optional<BlockImage>& image) {
              Rng rng(seed);
              const BlockmodelFit fit = fit_blockmodel(net, k, restarts, image, rng);
              py::dict out;
              out["criterion"] = fit.criterion;
              out["partition"] = fit.partition;
              out["image"] = fit.image;
              out["block_errors"] = fit.block_errors;
              return out;
          },
          py::arg("net"), py::arg("k"), py::arg("restarts") = 500, py::arg("seed") = 1,
          py::arg("image") = std::nullopt);
    m.def("classify_blocks", &classify_blocks, py::arg("net"), py::arg("partition"));
    m.def("criterion",
          [](const BinaryNetwork& net, const Partition& p, const std::optional<BlockImage>& image) {
              const CriterionResult r = evaluate_criterion(net, p, image);
              return py::make_tuple(r.criterion, r.image);
          },
          py::arg("net"), py::arg("partition"), py::arg("image") = std::nullopt);

    m.def("ideal_image",
          [](const std::string& kind, int k) { return ideal_image(ideal_kind_from_name(kind), k); },
          py::arg("kind"), py::arg("k"));
    m.def("inconsistent_blocks", &inconsistent_blocks, py::arg("observed"), py::arg("ideal"));
    m.def("randomize", &randomize, py::arg("net"), py::arg("rng"));
    m.def("relative_fit",
          [](const BinaryNetwork& net, const std::string& kind, int k, int k_rand, int restarts,
             std::uint64_t seed) {
              Rng rng(seed);
              const RfReport r = relative_fit(net, ideal_kind_from_name(kind), k, k_rand, restarts, rng);
              py::dict out;
              out["ideal_type"] = ideal_kind_name(r.kind);
              out["k"] = r.k;
              out["p_empirical"] = r.p_empirical;
              out["p_baseline"] = r.p_baseline;
              out["rf"] = r.rf ? py::cast(*r.rf) : py::none();
              return out;
          },
          py::arg("net"), py::arg("kind"), py::arg("k"), py::arg("k_rand") = 20,
          py::arg("restarts") = 500, py::arg("seed") = 1);
    m.def("relative_fit_directed",
          [](const BinaryNetwork& net, const std::string& kind, int k, int k_rand, int restarts,
             std::uint64_t seed) {
              Rng rng(seed);
              const RfReport r =
                  relative_fit_directed(net, ideal_kind_from_name(kind), k, k_rand, restarts, rng);
              py::dict out;
              out["ideal_type"] = ideal_kind_name(r.kind);
              out["k"] = r.k;
              out["p_empirical"] = r.p_empirical;
              out["p_baseline"] = r.p_baseline;
              out["rf"] = r.rf ? py::cast(*r.rf) : py::none();
              return out;
          },
          py::arg("net"), py::arg("kind"), py::arg("k"), py::arg("k_rand") = 20,
          py::arg("restarts") = 500, py::arg("seed") = 1);

    py::class_<ExperimentConfig>(m, "ExperimentConfig")
        .def(py::init<>())
        .def_readwrite("n_thetas", &ExperimentConfig::n_thetas)
        .def_readwrite("reps_per_theta", &ExperimentConfig::reps_per_theta)
        .def_readwrite("n_units", &ExperimentConfig::n_units)
        .def_readwrite("q", &ExperimentConfig::q)
        .def_readwrite("total_iterations", &ExperimentConfig::total_iterations)
        .def_readwrite("checkpoints", &ExperimentConfig::checkpoints)
        .def_readwrite("restarts", &ExperimentConfig::restarts)
        .def_readwrite("k_clusters", &ExperimentConfig::k_clusters)
        .def_readwrite("rf_k_rand", &ExperimentConfig::rf_k_rand)
        .def_readwrite("rf_restarts", &ExperimentConfig::rf_restarts)
        .def_readwrite("master_seed", &ExperimentConfig::master_seed)
        .def_readwrite("out_dir", &ExperimentConfig::out_dir)
        .def_readwrite("threads", &ExperimentConfig::threads)
        .def_readwrite("snapshots", &ExperimentConfig::snapshots)
        .def_property(
            "rf_mode",
            [](const ExperimentConfig& c) { return std::string(rf_mode_name(c.rf_mode)); },
            [](ExperimentConfig& c, const std::string& v) { c.rf_mode = rf_mode_from_name(v); })
        .def("set_thetas",
             [](ExperimentConfig& c, const std::vector<std::array<double, kMechanismCount>>& thetas) {
                 c.explicit_thetas.clear();
                 for (const auto& w : thetas) c.explicit_thetas.push_back(MechanismWeights::from_array(w));
             },
             py::arg("thetas"));

    m.def("run_experiment",
          [](const ExperimentConfig& config) {
              const RunResult result = run_experiment(config);
              py::list records;
              for (const SimulationRecord& r : result.records) {
                  py::dict row;
                  row["theta_id"] = r.theta_id;
                  row["rep"] = r.rep;
                  row["iter"] = r.iteration;
                  row["density"] = r.density;
                  row["inconsistent_blocks"] = r.inconsistent;
                  row["rf_core_cohesive"] = r.rf_core_cohesive ? py::cast(*r.rf_core_cohesive) : py::none();
                  row["rf_cohesive"] = r.rf_cohesive ? py::cast(*r.rf_cohesive) : py::none();
                  row["rf_core_periphery"] =
                      r.rf_core_periphery ? py::cast(*r.rf_core_periphery) : py::none();
                  records.append(row);
              }
              py::dict out;
              out["records"] = records;
              out["records_path"] = result.records_path;
              out["manifest_path"] = result.manifest_path;
              out["failures"] = result.failures;
              return out;
          },
          py::arg("config"));

    m.def("read_network", &read_network_auto, py::arg("path"), py::arg("directed") = std::nullopt);
    m.def("write_network_csv", &write_network_csv, py::arg("net"), py::arg("path"),
          py::arg("labels") = std::vector<std::string>{});
    m.def("write_matrix_pbm", &write_matrix_pbm, py::arg("net"), py::arg("partition"),
          py::arg("path"), py::arg("cell_px") = 8);
    m.def("write_matrix_svg", &write_matrix_svg, py::arg("net"), py::arg("partition"),
          py::arg("path"), py::arg("cell_px") = 12);

    m.attr("__version__") = "0.1.0";
}
