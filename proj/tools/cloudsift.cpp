// Command-line front end. One command per process; everything of substance
// lives in the headers under include/cloudsift.
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cloudsift/cloudsift.hpp"
#include "cloudsift/corpus_gen.hpp"

namespace fs = std::filesystem;
using namespace cloudsift;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void spill(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << text;
  if (!f) throw std::runtime_error("short write to " + path);
}

// Precedence: --registry flag, then CLOUDSIFT_REGISTRY, then the builtin
// catalog.
Registry load_registry(const std::string& flag_path) {
  std::string path = flag_path;
  if (path.empty())
    if (const char* env = std::getenv("CLOUDSIFT_REGISTRY")) path = env;
  if (path.empty()) return builtin_registry();
  return registry_from_json(slurp(path));
}

void emit_report(const nlohmann::json& j, const std::string& out_path, const std::string& format) {
  std::string text = format == "text" ? report_to_text(j) : j.dump(2) + "\n";
  if (out_path.empty() || out_path == "-")
    std::cout << text;
  else
    spill(out_path, text);
}

int cmd_analyze(const std::string& internal_path, const std::string& sd_path,
                const std::string& raw_path, const std::string& registry_path,
                const std::string& out_path, const std::string& format,
                const std::string& label_internal, const std::string& label_sd,
                const std::string& label_raw) {
  Registry reg = load_registry(registry_path);

  EvidenceTree internal = EvidenceTree::open_tree(internal_path);
  std::optional<EvidenceTree> sd;
  if (!sd_path.empty()) sd = EvidenceTree::open_tree(sd_path);
  std::optional<RawImage> raw;
  if (!raw_path.empty()) {
    raw = RawImage::open_image(raw_path);
    raw->label = label_raw;
  }

  AnalyzeInput in;
  in.internal = &internal;
  in.internal_label = label_internal;
  if (sd) in.sd = &*sd;
  in.sd_label = label_sd;
  if (raw) in.raw = &*raw;
  in.registry = &reg;

  AnalyzeResult res = analyze(in);

  // Warnings flip the exit code to "partial". A scan that simply found
  // nothing is still a clean run.
  size_t warning_count = 0;
  for (const auto& w : res.warnings)
    if (w != "no providers detected") ++warning_count;
  for (const auto& s : res.snapshots) warning_count += s.warnings.size();

  emit_report(report_to_json(res), out_path, format);
  return warning_count ? 2 : 0;
}

int cmd_merge(const std::vector<std::string>& report_paths, std::vector<std::string> labels,
              const std::string& out_path, const std::string& format) {
  if (!labels.empty() && labels.size() != report_paths.size())
    throw std::runtime_error("--label count must match the number of input reports");
  if (labels.empty()) labels = report_paths;

  std::vector<nlohmann::json> reports;
  reports.reserve(report_paths.size());
  for (const auto& p : report_paths) reports.push_back(nlohmann::json::parse(slurp(p)));

  nlohmann::json merged = merge_report_to_json(reports, labels);
  emit_report(merged, out_path, format);

  size_t warning_count = merged.value("warnings", nlohmann::json::array()).size();
  for (const auto& m : merged.value("merged", nlohmann::json::array()))
    warning_count += m.value("warnings", nlohmann::json::array()).size();
  return warning_count ? 2 : 0;
}

int cmd_carve(const std::string& image_path, const std::string& out_dir) {
  RawImage img = RawImage::open_image(image_path);
  std::vector<CarvedFile> found = carve_image(img.bytes);

  fs::create_directories(out_dir);
  nlohmann::json manifest = nlohmann::json::array();
  for (const auto& c : found) {
    fs::path dest = fs::path(out_dir) / c.logical_name;
    std::ofstream f(dest, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + dest.string());
    f.write(reinterpret_cast<const char*>(img.bytes.data() + c.offset),
            static_cast<std::streamsize>(c.length));
    manifest.push_back({{"name", c.logical_name},
                        {"type", c.type},
                        {"offset", c.offset},
                        {"length", c.length},
                        {"md5", c.md5},
                        {"sha1", c.sha1}});
  }
  spill((fs::path(out_dir) / "manifest.json").string(), manifest.dump(2) + "\n");
  std::cout << found.size() << " object(s) carved to " << out_dir << "\n";
  return 0;
}

int cmd_gen_corpus(const std::string& provider_s, const std::string& platform_s,
                   const std::string& version, const std::string& state_s, uint64_t seed,
                   const std::string& out_dir) {
  auto provider = parse_provider(provider_s);
  if (!provider) throw std::runtime_error("unknown provider: " + provider_s);
  auto platform = parse_platform(platform_s);
  if (!platform) throw std::runtime_error("unknown platform: " + platform_s);
  auto state = parse_device_state(state_s);
  if (!state) throw std::runtime_error("unknown device state: " + state_s);
  if (!is_cataloged(*provider, *platform, version))
    throw std::runtime_error("no cataloged app build " + provider_s + "/" + platform_s + "/" +
                             version);

  ScenarioSpec spec{*provider, *platform, version, *state, seed};
  Dataset ds = build_dataset(seed);
  generate_scenario(spec, ds, out_dir);
  std::cout << "scenario written to " << out_dir << "\n";
  return 0;
}

int cmd_box_url(const std::string& token, const std::string& file_id) {
  std::cout << reconstruct_box_url(token, file_id) << "\n";
  std::cerr << "note: the same path has also been served from host mobile-api.box.com\n";
  return 0;
}

int cmd_registry_export(const std::string& registry_path, const std::string& out_path) {
  Registry reg = load_registry(registry_path);
  std::string text = registry_to_json(reg);
  if (out_path.empty() || out_path == "-")
    std::cout << text;
  else
    spill(out_path, text);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"residual cloud-storage artifact analyzer"};
  app.set_version_flag("--version", std::string(kToolName) + " " + kToolVersion);
  app.require_subcommand(1);

  // analyze
  std::string an_internal, an_sd, an_raw, an_registry, an_out, an_format = "json";
  std::string an_li = "internal", an_ls = "sd", an_lr = "raw";
  auto* an = app.add_subcommand("analyze", "scan evidence and write a report");
  an->add_option("--internal", an_internal, "internal storage tree (directory or tar)")
      ->required();
  an->add_option("--sd", an_sd, "sd card tree (directory or tar)");
  an->add_option("--raw", an_raw, "raw image to carve");
  an->add_option("--registry", an_registry, "signature registry json (default: builtin)");
  an->add_option("--out", an_out, "report path ('-' for stdout)")->required();
  an->add_option("--format", an_format, "output format")
      ->check(CLI::IsMember({"json", "text"}));
  an->add_option("--label-internal", an_li, "label for the internal tree in the report");
  an->add_option("--label-sd", an_ls, "label for the sd tree in the report");
  an->add_option("--label-raw", an_lr, "label for the raw image in the report");

  // merge
  std::vector<std::string> mg_inputs, mg_labels;
  std::string mg_out, mg_format = "json";
  auto* mg = app.add_subcommand("merge", "combine reports from several devices");
  mg->add_option("reports", mg_inputs, "input report json files")
      ->expected(2, -1)
      ->required();
  mg->add_option("--label", mg_labels, "per-input source label (repeatable)");
  mg->add_option("--out", mg_out, "merged report path ('-' for stdout)")->required();
  mg->add_option("--format", mg_format, "output format")
      ->check(CLI::IsMember({"json", "text"}));

  // carve
  std::string cv_image, cv_out;
  auto* cv = app.add_subcommand("carve", "carve deleted files from a raw image");
  cv->add_option("--image", cv_image, "raw image path")->required();
  cv->add_option("--out-dir", cv_out, "directory for carved files + manifest.json")->required();

  // gen-corpus
  std::string gc_provider, gc_platform, gc_version, gc_state;
  uint64_t gc_seed = 1;
  std::string gc_out;
  auto* gc = app.add_subcommand("gen-corpus", "synthesize an evidence scenario");
  gc->add_option("--provider", gc_provider, "dropbox|box|sugarsync|syncplicity")->required();
  gc->add_option("--platform", gc_platform, "android|ios")->required();
  gc->add_option("--app-version", gc_version, "cataloged app version")->required();
  gc->add_option("--state", gc_state, "aps|cc|pwd|cc_pwd (or long form)")->required();
  gc->add_option("--seed", gc_seed, "generation seed");
  gc->add_option("--out", gc_out, "output directory")->required();

  // box-url
  std::string bu_token, bu_id;
  auto* bu = app.add_subcommand("box-url", "rebuild a direct download url");
  bu->add_option("--token", bu_token, "account auth token")->required();
  bu->add_option("--file-id", bu_id, "numeric file id")->required();

  // registry export
  auto* rg = app.add_subcommand("registry", "signature registry utilities");
  rg->require_subcommand(1);
  std::string re_registry, re_out;
  auto* re = rg->add_subcommand("export", "dump the active registry as json");
  re->add_option("--registry", re_registry, "registry json to re-export (default: active)");
  re->add_option("--out", re_out, "output path ('-' for stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // --help/--version exit 0; every usage error is fatal
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (*an)
      return cmd_analyze(an_internal, an_sd, an_raw, an_registry, an_out, an_format, an_li,
                         an_ls, an_lr);
    if (*mg) return cmd_merge(mg_inputs, mg_labels, mg_out, mg_format);
    if (*cv) return cmd_carve(cv_image, cv_out);
    if (*gc) return cmd_gen_corpus(gc_provider, gc_platform, gc_version, gc_state, gc_seed, gc_out);
    if (*bu) return cmd_box_url(bu_token, bu_id);
    if (*re) return cmd_registry_export(re_registry, re_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
