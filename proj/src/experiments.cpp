#include "rbc/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "format.hpp"
#include "parallel.hpp"
#include "rbc/barcode.hpp"
#include "rbc/seeding.hpp"

namespace rbc {

namespace fs = std::filesystem;

std::vector<ImageEntry> phantom_entries(std::size_t size) {
  std::vector<ImageEntry> out;
  for (PhantomKind kind : phantom_suite()) {
    const std::string name(phantom_name(kind));
    out.push_back({name, name, make_phantom(kind, size)});
  }
  return out;
}

namespace {

std::map<std::string, std::string> read_class_map(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read class map: " + path.string());
  std::map<std::string, std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) {
      throw std::runtime_error("class map line without ',': " + line);
    }
    out[line.substr(0, comma)] = line.substr(comma + 1);
  }
  return out;
}

}  // namespace

std::vector<ImageEntry> load_image_directory(const fs::path& dir, std::size_t size,
                                             const std::optional<fs::path>& class_map) {
  if (!fs::is_directory(dir)) throw std::runtime_error("not a directory: " + dir.string());
  const auto classes = class_map ? read_class_map(*class_map) : std::map<std::string, std::string>{};

  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    std::string ext = entry.path().extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    if (ext == ".png" || ext == ".pgm" || ext == ".bmp") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw std::runtime_error("no PNG/PGM/BMP images in " + dir.string());

  std::vector<ImageEntry> out;
  for (const auto& f : files) {
    const std::string name = f.filename().string();
    const auto it = classes.find(name);
    out.push_back({f.stem().string(), it != classes.end() ? it->second : "default",
                   normalize(load_image(f), size, size)});
  }
  return out;
}

std::string method_tag(Method m) {
  switch (m) {
    case Method::BruteForce4of16: return "BF-4/16";
    case Method::Mde4of180: return "MDE-4/180";
    case Method::Mde8of180: return "MDE-8/180";
    case Method::Custom: return "custom";
  }
  return "custom";
}

std::uint64_t run_seed(std::uint64_t master, const std::string& image_id, const std::string& label,
                       std::size_t run) {
  return derive_seed(master, {fnv1a(image_id), fnv1a(label), run});
}

std::optional<MeanStd> mean_std(const std::vector<double>& values) {
  if (values.empty()) return std::nullopt;
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  if (values.size() == 1) return MeanStd{mean, 0.0};
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return MeanStd{mean, std::sqrt(ss / static_cast<double>(values.size() - 1))};
}

namespace {

struct MethodPlan {
  Method method;
  std::string label;
  std::size_t angles;
  std::optional<DEConfig> de;  // nullopt: exhaustive 4-of-16
};

struct Job {
  std::size_t image;
  std::size_t plan;
  std::size_t run;
};

ExperimentReport run_plans(int series, const std::vector<ImageEntry>& images,
                           const std::vector<MethodPlan>& plans, const ExperimentOptions& opts) {
  if (images.empty()) throw std::invalid_argument("experiment: no images");
  if (opts.runs == 0) throw std::invalid_argument("experiment: runs must be >= 1");

  std::vector<Job> jobs;
  for (std::size_t i = 0; i < images.size(); ++i) {
    for (std::size_t p = 0; p < plans.size(); ++p) {
      const std::size_t runs = plans[p].de ? opts.runs : 1;
      for (std::size_t r = 0; r < runs; ++r) jobs.push_back({i, p, r});
    }
  }

  const AngleSet grid16 = equidistant_angles(16);
  std::vector<std::optional<RunRecord>> records(jobs.size());
  std::vector<double> elapsed(jobs.size(), 0.0);
  detail::parallel_for(jobs.size(), opts.jobs, [&](std::size_t j) {
    const Job& job = jobs[j];
    const ImageEntry& img = images[job.image];
    const MethodPlan& plan = plans[job.plan];
    const auto start = std::chrono::steady_clock::now();
    std::uint64_t seed = 0;
    SearchResult result = [&] {
      if (!plan.de) return exhaustive_search(img.image, plan.angles, grid16, opts.brute_force);
      DEConfig cfg = *plan.de;
      seed = cfg.seed = run_seed(opts.master_seed, img.id, plan.label, job.run);
      return mde_optimize(img.image, plan.angles, cfg);
    }();
    elapsed[j] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    records[j] = RunRecord{img.id, img.class_name, plan.method, plan.label, job.run, seed,
                           std::move(result)};
  });

  ExperimentReport report;
  report.series = series;
  for (std::size_t j = 0; j < jobs.size(); ++j) {
    report.seconds[plans[jobs[j].plan].label] += elapsed[j];
    report.runs.push_back(std::move(*records[j]));
  }

  nlohmann::json methods = nlohmann::json::array();
  for (const auto& p : plans) {
    nlohmann::json m = {{"label", p.label}, {"method", method_tag(p.method)}, {"angles", p.angles}};
    if (p.de) {
      m["de"] = to_json(*p.de);
      m["de"].erase("seed");
      m["runs"] = opts.runs;
    } else {
      m["candidates"] = 16;
      m["budget_cap"] = opts.brute_force.budget_cap;
      m["runs"] = 1;
    }
    methods.push_back(std::move(m));
  }
  report.config = {{"master_seed", opts.master_seed}, {"methods", std::move(methods)}};

  // Per image and method, in job order.
  struct ClassAcc {
    std::string class_name;
    std::size_t plan;
    std::size_t images = 0;
    std::vector<double> samples;
  };
  std::vector<ClassAcc> classes;
  std::size_t cursor = 0;
  for (std::size_t i = 0; i < images.size(); ++i) {
    for (std::size_t p = 0; p < plans.size(); ++p) {
      const std::size_t runs = plans[p].de ? opts.runs : 1;
      std::vector<double> scores;
      bool degenerate = false;
      const RunRecord* best = nullptr;
      for (std::size_t r = 0; r < runs; ++r, ++cursor) {
        const RunRecord& rec = report.runs[cursor];
        if (rec.result.best_score.defined()) {
          scores.push_back(rec.result.best_score.value());
        } else {
          degenerate = true;
        }
        if (!best || rec.result.best_score.rank() > best->result.best_score.rank()) best = &rec;
      }
      const auto stats = mean_std(scores);
      report.per_image.push_back(ImageSummary{
          images[i].id, images[i].class_name, plans[p].method, plans[p].label,
          best->result.best_angles, best->result.best_score, runs,
          stats ? std::optional(stats->mean) : std::nullopt,
          stats ? std::optional(stats->stddev) : std::nullopt, degenerate});

      auto it = std::find_if(classes.begin(), classes.end(), [&](const ClassAcc& c) {
        return c.class_name == images[i].class_name && c.plan == p;
      });
      if (it == classes.end()) {
        classes.push_back({images[i].class_name, p, 0, {}});
        it = classes.end() - 1;
      }
      ++it->images;
      it->samples.insert(it->samples.end(), scores.begin(), scores.end());
    }
  }
  for (const auto& c : classes) {
    const auto stats = mean_std(c.samples);
    report.per_class.push_back(ClassSummary{
        c.class_name, plans[c.plan].method, plans[c.plan].label, c.images, c.samples.size(),
        stats ? std::optional(stats->mean) : std::nullopt,
        stats ? std::optional(stats->stddev) : std::nullopt});
  }
  return report;
}

}  // namespace

ExperimentReport run_series1(const std::vector<ImageEntry>& images, const DEConfig& cfg,
                             const ExperimentOptions& opts) {
  DEConfig grid = cfg;
  grid.quantization_step = 180.0 / 16.0;
  grid.validate();
  return run_plans(1, images,
                   {{Method::BruteForce4of16, "BF-4/16", 4, std::nullopt},
                    {Method::Custom, "MDE-4/16", 4, grid}},
                   opts);
}

ExperimentReport run_series2(const std::vector<ImageEntry>& images, const DEConfig& cfg4,
                             const DEConfig& cfg8, const ExperimentOptions& opts) {
  cfg4.validate();
  cfg8.validate();
  return run_plans(2, images,
                   {{Method::BruteForce4of16, "BF-4/16", 4, std::nullopt},
                    {Method::Mde4of180, "MDE-4/180", 4, cfg4},
                    {Method::Mde8of180, "MDE-8/180", 8, cfg8}},
                   opts);
}

namespace {

nlohmann::json opt_json(const std::optional<double>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

std::string file_label(const std::string& label) {
  std::string out;
  for (char c : label) {
    if (c == '/') {
      out += "of";
    } else {
      out += c;
    }
  }
  return out;
}

void write_svg(const std::vector<const RunRecord*>& runs, const fs::path& path) {
  constexpr double kWidth = 640.0;
  constexpr double kHeight = 360.0;
  constexpr double kMargin = 40.0;
  std::size_t max_eval = 1;
  double lo = 1.0;
  double hi = -1.0;
  for (const auto* r : runs) {
    max_eval = std::max(max_eval, r->result.history.size());
    for (const auto& h : r->result.history) {
      if (!h.best_so_far.defined()) continue;
      lo = std::min(lo, h.best_so_far.value());
      hi = std::max(hi, h.best_so_far.value());
    }
  }
  if (hi < lo) {
    lo = 0.0;
    hi = 1.0;
  }
  if (hi - lo < 1e-6) hi = lo + 1e-6;

  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << kMargin << "\" y=\"20\" font-size=\"12\">best-so-far correlation ["
      << format_double(lo) << ", " << format_double(hi) << "] vs evaluation (1.." << max_eval
      << ")</text>\n";
  for (const auto* r : runs) {
    out << "<polyline fill=\"none\" stroke=\"steelblue\" stroke-opacity=\"0.5\" points=\"";
    for (const auto& h : r->result.history) {
      if (!h.best_so_far.defined()) continue;
      const double x = kMargin + (kWidth - 2 * kMargin) * static_cast<double>(h.evaluation - 1) /
                                     static_cast<double>(std::max<std::size_t>(1, max_eval - 1));
      const double y = kHeight - kMargin -
                       (kHeight - 2 * kMargin) * (h.best_so_far.value() - lo) / (hi - lo);
      out << format_double(x) << ',' << format_double(y) << ' ';
    }
    out << "\"/>\n";
  }
  out << "</svg>\n";
}

}  // namespace

nlohmann::json to_json(const ExperimentReport& report) {
  nlohmann::json per_image = nlohmann::json::array();
  for (const auto& s : report.per_image) {
    per_image.push_back({
        {"image", s.image_id},
        {"class", s.class_name},
        {"method", method_tag(s.method)},
        {"label", s.label},
        {"best_angles", std::vector<double>(s.best_angles.begin(), s.best_angles.end())},
        {"best_angles_rounded", s.best_angles.rounded()},
        {"best_score", s.best_score.defined() ? nlohmann::json(s.best_score.value()) : nullptr},
        {"runs", s.runs},
        {"mean", opt_json(s.mean)},
        {"std", opt_json(s.stddev)},
        {"degenerate", s.degenerate},
    });
  }
  nlohmann::json per_class = nlohmann::json::array();
  for (const auto& c : report.per_class) {
    per_class.push_back({
        {"class", c.class_name},
        {"method", method_tag(c.method)},
        {"label", c.label},
        {"images", c.images},
        {"samples", c.samples},
        {"mean", opt_json(c.mean)},
        {"std", opt_json(c.stddev)},
    });
  }
  return {{"series", report.series},
          {"config", report.config},
          {"per_image", std::move(per_image)},
          {"per_class", std::move(per_class)}};
}

void write_per_run_csv(const ExperimentReport& report, std::ostream& out) {
  out << "image,class,method,label,run,seed,evaluations,best_score,best_angles\n";
  for (const auto& r : report.runs) {
    out << r.image_id << ',' << r.class_name << ',' << method_tag(r.method) << ',' << r.label << ','
        << r.run << ',' << r.seed << ',' << r.result.evaluations << ','
        << (r.result.best_score.defined() ? format_double(r.result.best_score.value()) : "nan")
        << ',' << r.result.best_angles.to_string(';') << '\n';
  }
}

void write_report(const ExperimentReport& report, const std::vector<ImageEntry>& images,
                  const fs::path& out_dir, const WriteOptions& opts) {
  fs::create_directories(out_dir / "fitness_curves");
  fs::create_directories(out_dir / "barcodes");
  {
    std::ofstream out(out_dir / "report.json");
    if (!out) throw std::runtime_error("cannot write " + (out_dir / "report.json").string());
    out << to_json(report).dump(2) << '\n';
  }
  {
    std::ofstream out(out_dir / "per_run.csv");
    if (!out) throw std::runtime_error("cannot write " + (out_dir / "per_run.csv").string());
    write_per_run_csv(report, out);
  }
  std::map<std::pair<std::string, std::string>, std::vector<const RunRecord*>> grouped;
  for (const auto& r : report.runs) {
    const fs::path path = out_dir / "fitness_curves" /
                          (r.image_id + "_" + file_label(r.label) + "_" + std::to_string(r.run) + ".csv");
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    write_history_csv(r.result.history, out);
    grouped[{r.image_id, r.label}].push_back(&r);
  }
  if (opts.svg) {
    for (const auto& [key, runs] : grouped) {
      write_svg(runs, out_dir / "fitness_curves" / (key.first + "_" + file_label(key.second) + ".svg"));
    }
  }
  for (const auto& s : report.per_image) {
    const auto img = std::find_if(images.begin(), images.end(),
                                  [&](const ImageEntry& e) { return e.id == s.image_id; });
    if (img == images.end()) throw std::invalid_argument("write_report: unknown image " + s.image_id);
    render_barcode(generate_barcode(img->image, s.best_angles),
                   out_dir / "barcodes" / (s.image_id + "_" + file_label(s.label)));
  }
}

}  // namespace rbc
