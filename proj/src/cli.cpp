#include "rbc/cli.hpp"

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "format.hpp"
#include "rbc/barcode.hpp"
#include "rbc/experiments.hpp"
#include "rbc/fitness.hpp"
#include "rbc/microde.hpp"
#include "rbc/reconstruct.hpp"
#include "rbc/search.hpp"

namespace rbc::cli {

namespace fs = std::filesystem;

namespace {

constexpr std::string_view kEquidistant = "equidistant:";
constexpr std::string_view kPhantom = "phantom:";

std::size_t parse_count(std::string_view text) {
  std::size_t v = 0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw std::invalid_argument("not a count: '" + std::string(text) + "'");
  }
  return v;
}

void write_text_file(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

std::string score_text(const CorrelationScore& s) {
  return s.defined() ? format_double(s.value()) : std::string("undefined");
}

}  // namespace

AngleSet parse_angle_spec(std::string_view spec) {
  if (spec.starts_with(kEquidistant)) {
    return equidistant_angles(parse_count(spec.substr(kEquidistant.size())));
  }
  std::vector<double> angles;
  while (true) {
    const auto comma = spec.find(',');
    angles.push_back(parse_double(spec.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    spec.remove_prefix(comma + 1);
  }
  return AngleSet(std::move(angles));
}

GrayImage load_working_image(const std::string& source, std::size_t size) {
  if (std::string_view(source).starts_with(kPhantom)) {
    return make_phantom(std::string_view(source).substr(kPhantom.size()), size);
  }
  return normalize(load_image(source), size, size);
}

std::size_t default_size() {
  if (const char* env = std::getenv("RBC_SIZE"); env && *env) return parse_count(env);
  return 32;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Radon barcodes with optimized projection angles"};
  app.require_subcommand(1);

  std::size_t size = 0;
  try {
    size = default_size();
  } catch (const std::exception& e) {
    err << "error: RBC_SIZE: " << e.what() << '\n';
    return 2;
  }

  // barcode
  std::string bc_image;
  std::string bc_angles = "equidistant:4";
  std::string bc_out;
  auto* barcode = app.add_subcommand("barcode", "Generate the Radon barcode of an image");
  barcode->add_option("image", bc_image, "Image file or phantom:<kind>")->required();
  barcode->add_option("--angles", bc_angles, "equidistant:<n> or comma-separated degrees");
  barcode->add_option("--size", size, "Working resolution (square)")->check(CLI::Range(2, 4096));
  barcode->add_option("--out", bc_out, "Output stem; writes <stem>.pgm and <stem>.txt")->required();

  // optimize
  std::string op_image;
  std::size_t op_n = 4;
  std::string op_method = "mde";
  std::optional<std::string> op_candidates;
  std::optional<double> op_step;
  DEConfig de;
  std::optional<double> op_reach;
  SearchOptions bf;
  unsigned jobs = 1;
  std::string op_out;
  auto* optimize = app.add_subcommand("optimize", "Search for the best n projection angles");
  optimize->add_option("image", op_image, "Image file or phantom:<kind>")->required();
  optimize->add_option("-n", op_n, "Number of angles")->check(CLI::Range(1, 180));
  optimize->add_option("--method", op_method, "bf or mde")->check(CLI::IsMember({"bf", "mde"}));
  optimize->add_option("--candidates", op_candidates,
                       "bf: candidate angles (default equidistant:16); mde: equidistant:<m> grid");
  optimize->add_option("--np", de.population_size, "Population size");
  optimize->add_option("--f", de.scale_factor, "Mutation scale factor");
  optimize->add_option("--cr", de.crossover_rate, "Crossover rate");
  optimize->add_option("--nfc", de.max_evaluations, "Maximum fitness evaluations");
  optimize->add_option("--seed", de.seed, "Random seed");
  optimize->add_option("--step", op_step, "Angle quantization step in degrees (default 10)");
  optimize->add_option("--value-to-reach", op_reach, "Stop once this correlation is reached");
  optimize->add_option("--budget", bf.budget_cap, "Brute-force evaluation cap");
  optimize->add_option("--size", size, "Working resolution (square)")->check(CLI::Range(2, 4096));
  optimize->add_option("--jobs", jobs, "Worker threads")->check(CLI::Range(1, 1024));
  optimize->add_option("--out", op_out, "Output directory (result.json, history.csv)")->required();

  // experiment
  int ex_series = 2;
  std::string ex_images = "phantoms";
  std::optional<std::string> ex_classes;
  ExperimentOptions ex;
  std::string ex_out;
  bool ex_svg = false;
  auto* experiment = app.add_subcommand("experiment", "Run an experiment series");
  experiment->add_option("--series", ex_series, "1: BF vs grid MDE; 2: BF 4/16 vs MDE 4/180, 8/180")
      ->check(CLI::IsMember({1, 2}));
  experiment->add_option("--images", ex_images, "Image directory or 'phantoms'");
  experiment->add_option("--classes", ex_classes, "filename,class mapping file");
  experiment->add_option("--seed", ex.master_seed, "Master seed");
  experiment->add_option("--runs", ex.runs, "Micro-DE runs per image and method")->check(CLI::Range(1, 100000));
  experiment->add_option("--budget", ex.brute_force.budget_cap, "Brute-force evaluation cap");
  experiment->add_option("--size", size, "Working resolution (square)")->check(CLI::Range(2, 4096));
  experiment->add_option("--jobs", jobs, "Worker threads")->check(CLI::Range(1, 1024));
  experiment->add_option("--out", ex_out, "Output directory")->required();
  experiment->add_flag("--svg", ex_svg, "Also write SVG fitness curves");

  // phantom
  std::string ph_kind;
  std::string ph_out;
  auto* phantom = app.add_subcommand("phantom", "Write a synthetic phantom as PGM");
  phantom->add_option("kind", ph_kind, "shepp-logan, disk, square or gradient")->required();
  phantom->add_option("--size", size, "Side length")->check(CLI::Range(2, 4096));
  phantom->add_option("--out", ph_out, "Output PGM")->required();

  // reconstruct
  std::string rc_image;
  std::string rc_angles = "equidistant:180";
  std::string rc_out;
  auto* reconstruct = app.add_subcommand("reconstruct", "Filtered back-projection from chosen angles");
  reconstruct->add_option("image", rc_image, "Image file or phantom:<kind>")->required();
  reconstruct->add_option("--angles", rc_angles, "equidistant:<n> or comma-separated degrees");
  reconstruct->add_option("--size", size, "Working resolution (square)")->check(CLI::Range(2, 4096));
  reconstruct->add_option("--out", rc_out, "Output PGM (rescaled for display)")->required();

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? 0 : 2;
  }

  try {
    if (barcode->parsed()) {
      const GrayImage img = load_working_image(bc_image, size);
      const RadonBarcode code = generate_barcode(img, parse_angle_spec(bc_angles));
      const auto paths = render_barcode(code, bc_out);
      out << "angles: " << code.angles() << '\n'
          << "fragments: " << code.fragment_count() << " x " << code.fragment_length() << '\n'
          << "total_bits: " << code.total_bits() << '\n'
          << "wrote " << paths.stripe.string() << ", " << paths.text.string() << '\n';
      return 0;
    }

    if (optimize->parsed()) {
      const GrayImage img = load_working_image(op_image, size);
      nlohmann::json config = {{"image", op_image}, {"size", size}, {"n", op_n},
                               {"method", op_method}};
      SearchResult result = [&] {
        if (op_method == "bf") {
          if (op_step) throw std::invalid_argument("--step applies to mde only");
          const AngleSet candidates = parse_angle_spec(op_candidates.value_or("equidistant:16"));
          config["candidates"] = std::vector<double>(candidates.begin(), candidates.end());
          config["budget_cap"] = bf.budget_cap;
          bf.jobs = jobs;
          return exhaustive_search(img, op_n, candidates, bf);
        }
        if (op_candidates) {
          if (op_step) throw std::invalid_argument("give either --candidates or --step for mde");
          if (!op_candidates->starts_with(kEquidistant)) {
            throw std::invalid_argument("mde candidates must be an equidistant:<m> grid");
          }
          de.quantization_step =
              180.0 / static_cast<double>(parse_count(op_candidates->substr(kEquidistant.size())));
        } else if (op_step) {
          de.quantization_step = *op_step;
        }
        de.value_to_reach = op_reach;
        config["de"] = to_json(de);
        return mde_optimize(img, op_n, de, MdeOptions{jobs, {}});
      }();

      fs::create_directories(op_out);
      nlohmann::json doc = to_json(result);
      doc["config"] = std::move(config);
      write_text_file(fs::path(op_out) / "result.json", doc.dump(2) + "\n");
      std::ostringstream csv;
      write_history_csv(result.history, csv);
      write_text_file(fs::path(op_out) / "history.csv", csv.str());
      out << "best angles: " << result.best_angles << '\n'
          << "correlation: " << score_text(result.best_score) << '\n'
          << "evaluations: " << result.evaluations << '\n';
      return 0;
    }

    if (experiment->parsed()) {
      const auto images = ex_images == "phantoms"
                              ? phantom_entries(size)
                              : load_image_directory(ex_images, size,
                                                     ex_classes ? std::optional<fs::path>(*ex_classes)
                                                                : std::nullopt);
      ex.jobs = jobs;
      ExperimentReport report = ex_series == 1
                                    ? run_series1(images, DEConfig::four_angles(), ex)
                                    : run_series2(images, DEConfig::four_angles(),
                                                  DEConfig::eight_angles(), ex);
      report.config["images"] = ex_images;
      report.config["size"] = size;
      report.config["runs"] = ex.runs;
      write_report(report, images, ex_out, WriteOptions{ex_svg});
      for (const auto& [label, secs] : report.seconds) {
        err << "wall-clock " << label << ": " << secs << " s total\n";
      }
      for (const auto& s : report.per_image) {
        out << s.image_id << ' ' << s.label << ' ' << s.best_angles << ' '
            << score_text(s.best_score);
        if (s.mean) out << " mean " << format_double(*s.mean) << " std " << format_double(*s.stddev);
        if (s.degenerate) out << " (degenerate)";
        out << '\n';
      }
      return 0;
    }

    if (phantom->parsed()) {
      save_pgm(make_phantom(ph_kind, size), ph_out);
      out << "wrote " << ph_out << '\n';
      return 0;
    }

    if (reconstruct->parsed()) {
      const GrayImage img = load_working_image(rc_image, size);
      const Reconstruction rec = inverse_radon(sinogram(img, parse_angle_spec(rc_angles)), size);
      save_pgm_rescaled(rec.values(), size, size, rc_out);
      out << "correlation: " << score_text(correlation(img, rec)) << '\n';
      return 0;
    }
  } catch (const BudgetExceeded& e) {
    err << "error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}

}  // namespace rbc::cli
