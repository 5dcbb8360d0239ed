// Copyright 2026 The crowdshare Authors
// SPDX-License-Identifier: Apache-2.0

#include "commands.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "crowdshare/codec.hpp"
#include "crowdshare/imaging.hpp"
#include "crowdshare/ranking.hpp"
#include "crowdshare/satisfaction.hpp"
#include "json.hpp"
#include "scenario.hpp"
#include "simulate.hpp"

namespace crowdshare::cli {
namespace {

std::vector<std::uint8_t> read_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_bytes(const std::string& path, const std::vector<std::uint8_t>& bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("write failed: " + path);
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::string psnr_text(double db) {
  if (std::isinf(db)) return "inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", db);
  return buf;
}

std::vector<std::string> split_labels(const std::string& csv) {
  std::vector<std::string> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

struct Globals {
  std::uint64_t seed = 0;
  bool seed_given = false;
  bool verbose = false;
};

struct EncodeArgs {
  std::string in, annotations, out, select;
  int levels = 3;
  double budget = 1.0;
  std::size_t target_bytes = 0;
  bool compare = false;
};

void cmd_encode(const EncodeArgs& a, const Globals& g, std::ostream& out, std::ostream& err) {
  const auto image = imaging::read_image_file(a.in);
  saliency::SaliencyAnnotation ann;
  if (!a.annotations.empty()) ann = saliency::read_annotation_file(a.annotations);
  ann.validate(image.width, image.height);

  codec::EncoderConfig cfg;
  cfg.levels = a.levels;
  cfg.budget_fraction = a.budget;
  if (!a.select.empty()) {
    const auto labels = split_labels(a.select);
    const auto known = ann.labels();
    for (const auto& l : labels) {
      if (std::find(known.begin(), known.end(), l) == known.end()) {
        throw std::invalid_argument("--select names unknown label '" + l + "'");
      }
    }
    cfg.selected_labels = saliency::LabelSet(labels.begin(), labels.end());
  }
  const auto bs = a.target_bytes > 0 ? codec::encode_to_size(image, ann, cfg, a.target_bytes)
                                     : codec::encode_image(image, ann, cfg);
  const auto bytes = codec::serialize_bitstream(bs);
  write_bytes(a.out, bytes);

  const std::size_t total = static_cast<std::size_t>(bs.header.width) * bs.header.height;
  out << "bytes=" << bytes.size() << " coefficients=" << total
      << " selected=" << bs.header.selected_count;
  if (a.compare) {
    const auto decoded = codec::decode_image(bs);
    out << " psnr_db=" << psnr_text(codec::quality_metrics(image, decoded).psnr_db);
    for (const auto& box : ann.boxes) {
      const auto mask = codec::box_mask(image.width, image.height, std::span(&box, 1));
      out << " psnr_db[" << box.label
          << "]=" << psnr_text(codec::quality_metrics(image, decoded, &mask).psnr_db);
    }
  }
  out << '\n';
  if (g.verbose) {
    err << "encoded " << a.in << " at budget " << a.budget << " with " << a.levels << " levels, "
        << bs.header.boxes.size() << " boxes sent\n";
  }
}

void cmd_decode(const std::string& in, const std::string& out_path, bool ascii, const Globals& g,
                std::ostream& err) {
  const auto bytes = read_bytes(in);
  const auto image = codec::decode_image(codec::parse_bitstream(bytes));
  imaging::write_image_file(out_path, image,
                            ascii ? imaging::PnmEncoding::Ascii : imaging::PnmEncoding::Binary);
  if (g.verbose) err << "decoded " << image.width << "x" << image.height << " to " << out_path << '\n';
}

void cmd_rank(const std::string& image_path, const std::string& annotations,
              const std::string& manifest, int levels, std::ostream& out) {
  const auto image = imaging::read_image_file(image_path);
  const auto ann = saliency::read_annotation_file(annotations);
  ann.validate(image.width, image.height);
  const auto repo = ranking::load_repository_manifest(manifest);
  const auto r = ranking::rank_objects(image, ann, repo, levels);

  nlohmann::ordered_json j;
  j["object_count"] = r.object_count();
  j["ranked"] = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < r.ranked_labels.size(); ++i) {
    nlohmann::ordered_json e;
    e["label"] = r.ranked_labels[i];
    e["similarity"] = r.similarity[i];
    if (r.closest_entry[i]) {
      e["closest_image"] = repo.entries[*r.closest_entry[i]].image_path;
    } else {
      e["closest_image"] = nullptr;
    }
    j["ranked"].push_back(e);
  }
  out << j.dump(2) << '\n';
}

struct SurveyArgs {
  std::string out;
  int rows = 500;
  double noise = 0.0;
  double delta_half = 3.0;
  double gamma = 2.0;
  double delay_max = satisfaction::kDefaultDelayMax;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Saliency-guided image coding and bandwidth sharing", "crowdshare"};
  app.set_version_flag("--version", "crowdshare 0.1.0");
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--seed", g.seed, "Seed for randomized steps")->each([&](const std::string&) {
    g.seed_given = true;
  });
  app.add_flag("-v,--verbose", g.verbose, "Progress on stderr");

  EncodeArgs enc;
  auto* encode = app.add_subcommand("encode", "Encode a PNM image into an SGWC bitstream");
  encode->add_option("--in", enc.in, "Input PNM")->required()->check(CLI::ExistingFile);
  encode->add_option("--annotations", enc.annotations, "Salient box JSON")->check(CLI::ExistingFile);
  encode->add_option("--out", enc.out, "Output bitstream")->required();
  encode->add_option("--levels", enc.levels, "Wavelet levels")->check(CLI::Range(1, 16));
  encode->add_option("--budget", enc.budget, "Fraction of coefficients to send")
      ->check(CLI::Range(0.0, 1.0));
  encode->add_option("--target-bytes", enc.target_bytes, "Search the budget for this file size");
  encode->add_option("--select", enc.select, "Comma-separated labels kept salient");
  encode->add_flag("--compare", enc.compare, "Decode and report PSNR against the input");

  std::string dec_in, dec_out;
  bool dec_ascii = false;
  auto* decode = app.add_subcommand("decode", "Decode an SGWC bitstream to PNM");
  decode->add_option("--in", dec_in, "Input bitstream")->required()->check(CLI::ExistingFile);
  decode->add_option("--out", dec_out, "Output PNM")->required();
  decode->add_flag("--ascii", dec_ascii, "Write P2/P3 instead of P5/P6");

  std::string rank_image, rank_ann, rank_manifest;
  int rank_levels = ranking::kDefaultPyramidLevels;
  auto* rank = app.add_subcommand("rank", "Rank annotated objects against a repository");
  rank->add_option("--image", rank_image)->required()->check(CLI::ExistingFile);
  rank->add_option("--annotations", rank_ann)->required()->check(CLI::ExistingFile);
  rank->add_option("--repo-manifest", rank_manifest)->required()->check(CLI::ExistingFile);
  rank->add_option("--levels", rank_levels, "Pyramid levels")
      ->check(CLI::Range(0, ranking::kMaxPyramidLevels));

  SurveyArgs sv;
  auto* survey = app.add_subcommand("survey-gen", "Write a synthetic satisfaction survey");
  survey->add_option("--out", sv.out)->required();
  survey->add_option("--rows", sv.rows)->check(CLI::Range(1, 10000000));
  survey->add_option("--noise", sv.noise, "Gaussian noise sd on us")->check(CLI::NonNegativeNumber);
  survey->add_option("--delta-half", sv.delta_half)->check(CLI::PositiveNumber);
  survey->add_option("--gamma", sv.gamma)->check(CLI::PositiveNumber);
  survey->add_option("--delay-max", sv.delay_max)->check(CLI::PositiveNumber);

  std::string train_in, train_out;
  int train_k = 5;
  auto* train = app.add_subcommand("train", "Fit the k-NN satisfaction model");
  train->add_option("--survey", train_in)->required()->check(CLI::ExistingFile);
  train->add_option("--k", train_k)->check(CLI::PositiveNumber);
  train->add_option("--out", train_out)->required();

  std::string sim_config, sim_report;
  auto* simulate = app.add_subcommand("simulate", "Run a bandwidth sharing scenario");
  simulate->add_option("--config", sim_config)->required()->check(CLI::ExistingFile);
  simulate->add_option("--out-report", sim_report)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    std::ostringstream o, e2;
    const int code = app.exit(e, o, e2);
    out << o.str();
    err << e2.str();
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*encode) {
      cmd_encode(enc, g, out, err);
    } else if (*decode) {
      cmd_decode(dec_in, dec_out, dec_ascii, g, err);
    } else if (*rank) {
      cmd_rank(rank_image, rank_ann, rank_manifest, rank_levels, out);
    } else if (*survey) {
      const auto table = satisfaction::synthesize_survey({sv.delta_half, sv.gamma}, sv.rows, sv.noise,
                                                         g.seed, sv.delay_max);
      satisfaction::write_survey_csv(sv.out, table);
      if (g.verbose) err << "wrote " << table.rows.size() << " rows to " << sv.out << '\n';
    } else if (*train) {
      const auto table = satisfaction::read_survey_csv(train_in);
      if (static_cast<std::size_t>(train_k) > table.rows.size()) {
        throw UsageError("--k exceeds the survey row count");
      }
      write_text(train_out, satisfaction::model_to_json(satisfaction::train_satisfaction(table, train_k)));
      if (g.verbose) err << "trained k=" << train_k << " on " << table.rows.size() << " rows\n";
    } else if (*simulate) {
      const auto config = read_scenario_file(sim_config);
      const auto report = run_simulation(config, g.seed_given ? std::optional(g.seed) : std::nullopt,
                                         g.verbose ? &err : nullptr);
      write_report(report, sim_report);
      out << "objective_value=" << report.objective_value << " customers=" << report.rows.size()
          << '\n';
    }
  } catch (const SchemaError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitDomain;
  }
  return kExitOk;
}

}  // namespace crowdshare::cli
