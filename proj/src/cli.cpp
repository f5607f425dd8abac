#include "edgeseg/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <optional>

#include <CLI11.hpp>

#include "edgeseg/edges.hpp"
#include "edgeseg/errors.hpp"
#include "edgeseg/export.hpp"
#include "edgeseg/fileio.hpp"
#include "edgeseg/metrics.hpp"
#include "edgeseg/nifti.hpp"
#include "edgeseg/normalize.hpp"
#include "edgeseg/phantom.hpp"
#include "edgeseg/report.hpp"
#include "edgeseg/targets.hpp"
#include "edgeseg/toy.hpp"

namespace edgeseg::cli {

namespace fs = std::filesystem;

namespace {

void require_input(const fs::path& p) {
  if (!fs::exists(p)) throw IoError("no such file or directory: " + p.string());
}

void require_output(const fs::path& p) {
  const fs::path parent = p.parent_path();
  if (!parent.empty() && !fs::is_directory(parent)) throw IoError("output directory does not exist: " + parent.string());
  if (fs::is_directory(p)) throw IoError("output path is a directory: " + p.string());
}

struct CaseVolumes {
  Volume flair, t1ce, t2;
};

const char* const kModalities[3] = {"flair.nii", "t1ce.nii", "t2.nii"};

void require_case(const fs::path& dir) {
  for (const char* name : kModalities) require_input(dir / name);
}

/// Reads and z-score normalises the three modalities of a case directory.
CaseVolumes load_normalized(const fs::path& dir) {
  return {zscore_normalize(read_volume(dir / "flair.nii")), zscore_normalize(read_volume(dir / "t1ce.nii")),
          zscore_normalize(read_volume(dir / "t2.nii"))};
}

std::vector<fs::path> case_dirs(const fs::path& data_dir) {
  std::vector<fs::path> dirs;
  for (const auto& entry : fs::directory_iterator(data_dir))
    if (entry.is_directory() && fs::exists(entry.path() / "seg.nii") && fs::exists(entry.path() / kModalities[0]))
      dirs.push_back(entry.path());
  std::sort(dirs.begin(), dirs.end());
  return dirs;
}

struct Options {
  // normalize
  std::string in, out;
  // edges / onehot
  std::string labels, edges;
  bool oracle = false;
  // evaluate
  std::string pred, gt, subject, csv;
  // aggregate
  std::string stat = "mean";
  // phantom
  std::uint64_t seed = 0;
  int count = 1;
  int size = 64;
  double noise = 0.05;
  std::string out_dir;
  // train
  std::string data_dir, model_out, trace_out;
  int classes = 4;
  int epochs = 50;
  double lr = 0.01;
  int batch = 4096;
  // predict
  std::string model, case_dir, pred_out, activations_dir;
  std::vector<std::string> edge_overlay;
};

void cmd_normalize(const Options& o) {
  require_input(o.in);
  require_output(o.out);
  write_nifti(zscore_normalize(read_volume(o.in)), o.out);
}

void cmd_edges(const Options& o) {
  require_input(o.labels);
  require_output(o.out);
  const LabelVolume labels = read_labels(o.labels);
  write_nifti(o.oracle ? oracle_boundary(labels) : extract_edges(labels), o.out);
}

void cmd_onehot(const Options& o) {
  require_input(o.labels);
  if (!o.edges.empty()) require_input(o.edges);
  require_output(o.out);
  const LabelVolume labels = read_labels(o.labels);
  write_nifti(o.edges.empty() ? onehot_regions(labels) : onehot_regions_edges(labels, read_labels(o.edges)), o.out);
}

void cmd_evaluate(const Options& o) {
  require_input(o.pred);
  require_input(o.gt);
  require_output(o.csv);
  const auto records = evaluate_patient(read_labels(o.pred), read_labels(o.gt), o.subject);
  std::string text = fs::exists(o.csv) ? read_file(o.csv) : std::string(kMetricsCsvHeader) + "\n";
  if (!text.empty() && text.back() != '\n') text += '\n';
  for (const auto& r : records) text += format_metrics_row(r) + "\n";
  write_file_atomic(o.csv, text);
}

void cmd_aggregate(const Options& o) {
  require_input(o.csv);
  require_output(o.out);
  const Statistic stat = parse_statistic(o.stat);
  const auto records = parse_metrics_csv(read_file(o.csv));
  write_summary_csv(aggregate(records, stat), o.out);
}

void cmd_phantom(const Options& o) {
  const fs::path parent = fs::path(o.out_dir).parent_path();
  if (!parent.empty() && !fs::is_directory(parent)) throw IoError("output directory does not exist: " + parent.string());
  generate_cohort(o.count, o.seed, o.size, o.noise, o.out_dir);
}

void cmd_train(const Options& o, std::ostream& out) {
  require_input(o.data_dir);
  require_output(o.model_out);
  if (!o.trace_out.empty()) require_output(o.trace_out);
  const auto dirs = case_dirs(o.data_dir);
  if (dirs.empty()) throw UsageError("no cases found under " + o.data_dir);
  for (const auto& d : dirs) require_case(d);

  std::vector<TrainingCase> cases;
  for (const auto& dir : dirs) {
    const CaseVolumes v = load_normalized(dir);
    const LabelVolume labels = read_labels(dir / "seg.nii");
    require_same_dims(v.flair, labels, "train");
    OneHotStack targets = o.classes == kEdgeChannels ? onehot_regions_edges(labels, extract_edges(labels)) : onehot_regions(labels);
    cases.push_back({extract_features(v.flair, v.t1ce, v.t2), std::move(targets)});
  }

  TrainConfig cfg;
  cfg.learning_rate = o.lr;
  cfg.epochs = o.epochs;
  cfg.batch_size = o.batch;
  cfg.seed = o.seed;
  const TrainResult result = train(cases, cfg);
  save_model(result.model, o.model_out);
  if (!o.trace_out.empty()) {
    std::string trace = "epoch,loss\n";
    char buf[64];
    for (std::size_t e = 0; e < result.loss_trace.size(); ++e) {
      std::snprintf(buf, sizeof buf, "%zu,%.17g\n", e + 1, result.loss_trace[e]);
      trace += buf;
    }
    write_file_atomic(o.trace_out, trace);
  }
  out << "trained " << result.model.classes() << "-class model on " << cases.size() << " cases, " << result.steps
      << " steps\n";
}

void cmd_predict(const Options& o) {
  require_input(o.model);
  require_case(o.case_dir);
  require_output(o.pred_out);
  std::optional<int> overlay_z;
  if (!o.edge_overlay.empty()) {
    if (o.edge_overlay.size() != 2) throw UsageError("--edge-overlay takes <z> <path>");
    try {
      std::size_t used = 0;
      overlay_z = std::stoi(o.edge_overlay[0], &used);
      if (used != o.edge_overlay[0].size()) throw std::invalid_argument("z");
    } catch (const std::exception&) {
      throw UsageError("--edge-overlay slice must be an integer");
    }
    require_output(o.edge_overlay[1]);
  }
  if (!o.activations_dir.empty()) {
    const fs::path parent = fs::path(o.activations_dir).parent_path();
    if (!parent.empty() && !fs::is_directory(parent)) throw IoError("output directory does not exist: " + parent.string());
  }

  const ToyModel model = load_model(o.model);
  const CaseVolumes v = load_normalized(o.case_dir);
  const ProbabilityStack probs = predict(model, extract_features(v.flair, v.t1ce, v.t2));
  if (overlay_z && (*overlay_z < 0 || *overlay_z >= probs.dims.nz)) throw UsageError("--edge-overlay slice out of range");

  const ClassVolume classes = argmax_labels(probs);
  LabelVolume fused = fuse_prediction(classes, model.classes());
  fused.spacing = v.flair.spacing;
  write_nifti(fused, o.pred_out);

  if (!o.activations_dir.empty()) {
    fs::create_directories(o.activations_dir);
    const int z = probs.dims.nz / 2;
    for (int c = 0; c < probs.channels(); ++c)
      export_activation_slice(probs, c, z,
                              fs::path(o.activations_dir) / ("activation_c" + std::to_string(c) + "_z" + std::to_string(z) + ".pgm"));
  }
  if (overlay_z) {
    const EdgeVolume edges = model.classes() == kEdgeChannels ? edges_from_classes(classes) : extract_edges(fused);
    export_edge_overlay(fused, edges, *overlay_z, o.edge_overlay[1]);
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Edge-aware brain tumour segmentation toolkit", "edgeseg"};
  app.require_subcommand(1);
  Options o;

  auto* normalize = app.add_subcommand("normalize", "Z-score a modality over its nonzero brain region");
  normalize->add_option("--in", o.in, "input volume (.nii)")->required();
  normalize->add_option("--out", o.out, "output volume (.nii)")->required();

  auto* edges = app.add_subcommand("edges", "Extract label edges with the 26-neighbour filter");
  edges->add_option("--labels", o.labels, "label volume")->required();
  edges->add_option("--out", o.out, "edge volume (uint8 .nii)")->required();
  edges->add_flag("--oracle", o.oracle, "use the neighbour-comparison boundary instead");

  auto* onehot = app.add_subcommand("onehot", "Build a 4-channel (or 7-channel with --edges) one-hot stack");
  onehot->add_option("--labels", o.labels, "label volume")->required();
  onehot->add_option("--out", o.out, "4D uint8 stack (.nii)")->required();
  onehot->add_option("--edges", o.edges, "edge volume; selects the 7-channel layout");

  auto* evaluate = app.add_subcommand("evaluate", "Append WT/TC/ET Dice and HD95 rows for one subject");
  evaluate->add_option("--pred", o.pred, "predicted labels")->required();
  evaluate->add_option("--gt", o.gt, "ground-truth labels")->required();
  evaluate->add_option("--subject", o.subject, "subject id")->required();
  evaluate->add_option("--csv", o.csv, "per-patient CSV, appended")->required();

  auto* aggregate_cmd = app.add_subcommand("aggregate", "Summarise per-patient rows into a mean or median table");
  aggregate_cmd->add_option("--csv", o.csv, "per-patient CSV")->required();
  aggregate_cmd->add_option("--out", o.out, "summary CSV")->required();
  aggregate_cmd->add_option("--stat", o.stat, "mean or median")->check(CLI::IsMember({"mean", "median"}));

  auto* phantom = app.add_subcommand("phantom", "Generate a synthetic cohort");
  phantom->add_option("--seed", o.seed, "base seed")->required();
  phantom->add_option("--count", o.count, "number of cases")->check(CLI::PositiveNumber);
  phantom->add_option("--size", o.size, "edge length in voxels")->check(CLI::Range(16, 512));
  phantom->add_option("--noise", o.noise, "Gaussian noise sigma")->check(CLI::NonNegativeNumber);
  phantom->add_option("--out-dir", o.out_dir, "output directory")->required();

  auto* train_cmd = app.add_subcommand("train", "Train the linear softmax voxel classifier");
  train_cmd->add_option("--data-dir", o.data_dir, "directory of cases")->required();
  train_cmd->add_option("--classes", o.classes, "4 (regions) or 7 (regions + edges)")->check(CLI::IsMember({4, 7}));
  train_cmd->add_option("--epochs", o.epochs, "passes over the training voxels")->check(CLI::NonNegativeNumber);
  train_cmd->add_option("--lr", o.lr, "learning rate")->check(CLI::PositiveNumber);
  train_cmd->add_option("--batch", o.batch, "voxels per batch")->check(CLI::PositiveNumber);
  train_cmd->add_option("--seed", o.seed, "batch order seed");
  train_cmd->add_option("--model-out", o.model_out, "model file")->required();
  train_cmd->add_option("--trace-out", o.trace_out, "per-epoch loss CSV");

  auto* predict_cmd = app.add_subcommand("predict", "Segment one case with a trained model");
  predict_cmd->add_option("--model", o.model, "model file")->required();
  predict_cmd->add_option("--case-dir", o.case_dir, "case directory")->required();
  predict_cmd->add_option("--pred-out", o.pred_out, "fused label volume (.nii)")->required();
  predict_cmd->add_option("--activations-dir", o.activations_dir, "write per-channel PGM slices here");
  predict_cmd->add_option("--edge-overlay", o.edge_overlay, "<z> <path>: PPM overlay of predicted edges")->expected(2);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "edgeseg: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (*normalize) cmd_normalize(o);
    else if (*edges) cmd_edges(o);
    else if (*onehot) cmd_onehot(o);
    else if (*evaluate) cmd_evaluate(o);
    else if (*aggregate_cmd) cmd_aggregate(o);
    else if (*phantom) cmd_phantom(o);
    else if (*train_cmd) cmd_train(o, out);
    else if (*predict_cmd) cmd_predict(o);
  } catch (const UsageError& e) {
    err << "edgeseg: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DomainError& e) {
    err << "edgeseg: " << e.what() << "\n";
    return kExitDomain;
  } catch (const IoError& e) {
    err << "edgeseg: " << e.what() << "\n";
    return kExitIo;
  } catch (const FormatError& e) {
    err << "edgeseg: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "edgeseg: " << e.what() << "\n";
    return kExitIo;
  }
  return kExitOk;
}

}  // namespace edgeseg::cli
