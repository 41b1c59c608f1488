#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <set>

#include "gridfill/error.hpp"
#include "gridfill/harness.hpp"
#include "gridfill/io.hpp"

namespace gridfill {

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw IoError("failed writing " + path.string());
}

std::string clean(std::string text) {
  for (char& c : text) {
    if (c == ',') c = ';';
    if (c == '\n' || c == '\r') c = ' ';
  }
  return text;
}

// Methods without runs or with too few runs for a test are still ranked, by mean.
SignificanceReport rank_without_tests(const std::vector<RunSample>& samples, double alpha) {
  SignificanceReport rep;
  rep.alpha = alpha;
  const std::size_t m = samples.size();
  rep.beats.assign(m, std::vector<bool>(m, false));
  rep.test_used.assign(m, std::vector<TestKind>(m, TestKind::none));
  rep.p_values.assign(m, std::vector<double>(m, 1.0));
  for (const auto& s : samples) {
    rep.methods.push_back(s.method);
    rep.normal.push_back(false);
    const double mean = s.values.empty()
                            ? 0.0
                            : std::accumulate(s.values.begin(), s.values.end(), 0.0) / static_cast<double>(s.values.size());
    rep.ranks.push_back({s.method, 0, mean, 0});
  }
  std::sort(rep.ranks.begin(), rep.ranks.end(), [](const RankEntry& a, const RankEntry& b) {
    return a.mean != b.mean ? a.mean < b.mean : a.method < b.method;
  });
  for (std::size_t r = 0; r < m; ++r) rep.ranks[r].rank = static_cast<int>(r + 1);
  return rep;
}

}  // namespace

std::vector<PRanking> rank_by_p(const ExperimentResult& result, double alpha) {
  std::set<std::pair<Method, double>> failed;
  for (const auto& f : result.failures) failed.insert({f.method, f.p});

  std::vector<PRanking> out;
  for (double p : result.p_values) {
    std::map<Method, std::map<int, double>> by_method;
    for (const auto& r : result.records) {
      if (r.p == p) by_method[r.method][r.run_index] = r.mae;
    }
    std::size_t full = 0;
    for (const auto& [_, runs] : by_method) full = std::max(full, runs.size());

    std::vector<RunSample> samples;
    std::set<int> run_ids;
    for (Method m : result.methods) {
      const auto it = by_method.find(m);
      if (it == by_method.end() || it->second.size() != full || failed.count({m, p})) continue;
      std::set<int> ids;
      RunSample s{std::string(to_string(m)), {}};
      for (const auto& [run, v] : it->second) {
        ids.insert(run);
        s.values.push_back(v);
      }
      if (samples.empty()) run_ids = ids;
      if (ids != run_ids) continue;  // cannot be paired with the others
      samples.push_back(std::move(s));
    }

    PRanking pr;
    pr.p = p;
    for (const auto& s : samples) pr.methods.push_back(s.method);
    if (samples.size() >= 2 && full >= 2) {
      pr.report = compare_and_rank(samples, alpha);
    } else {
      pr.report = rank_without_tests(samples, alpha);
    }
    out.push_back(std::move(pr));
  }
  return out;
}

void emit_report(const ExperimentResult& result, const std::filesystem::path& out_dir, double alpha) {
  if (result.records.empty() && result.failures.empty()) throw InvalidArgument("no run records to report");
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create " + out_dir.string() + ": " + ec.message());

  {
    const auto path = out_dir / "runs.csv";
    auto out = open_out(path);
    out << "method,p,run_index,seed,mae,iterations\n";
    for (const auto& r : result.records) {
      out << to_string(r.method) << ',' << format_double(r.p) << ',' << r.run_index << ',' << r.seed << ','
          << format_double(r.mae) << ',' << r.iterations << '\n';
    }
    finish(out, path);
  }
  {
    const auto path = out_dir / "timings.csv";
    auto out = open_out(path);
    out << "method,p,run_index,wall_time_ms\n";
    for (const auto& r : result.records) {
      out << to_string(r.method) << ',' << format_double(r.p) << ',' << r.run_index << ','
          << format_double(r.wall_time_ms) << '\n';
    }
    finish(out, path);
  }
  {
    const auto path = out_dir / "failures.csv";
    auto out = open_out(path);
    out << "method,p,run_index,seed,message\n";
    for (const auto& f : result.failures) {
      out << to_string(f.method) << ',' << format_double(f.p) << ',' << f.run_index << ',' << f.seed << ','
          << clean(f.message) << '\n';
    }
    finish(out, path);
  }
  {
    const auto path = out_dir / "mae_by_p.csv";
    auto out = open_out(path);
    out << "method,p,n,mean_mae,sd_mae\n";
    for (Method m : result.methods) {
      for (double p : result.p_values) {
        std::vector<double> v;
        for (const auto& r : result.records) {
          if (r.method == m && r.p == p) v.push_back(r.mae);
        }
        out << to_string(m) << ',' << format_double(p) << ',' << v.size() << ',';
        if (!v.empty()) {
          const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
          out << format_double(mean);
          if (v.size() > 1) {
            double ss = 0.0;
            for (double x : v) ss += (x - mean) * (x - mean);
            out << ',' << format_double(std::sqrt(ss / static_cast<double>(v.size() - 1)));
          } else {
            out << ',';
          }
        } else {
          out << ',';
        }
        out << '\n';
      }
    }
    finish(out, path);
  }

  const auto rankings = rank_by_p(result, alpha);
  {
    const auto path = out_dir / "ranking.csv";
    auto out = open_out(path);
    out << "p,method,wins,mean_mae,rank\n";
    for (const auto& pr : rankings) {
      for (const auto& e : pr.report.ranks) {
        out << format_double(pr.p) << ',' << e.method << ',' << e.wins << ',' << format_double(e.mean) << ','
            << e.rank << '\n';
      }
    }
    finish(out, path);
  }
  {
    const auto path = out_dir / "pairwise.csv";
    auto out = open_out(path);
    out << "p,method,versus,test,p_value,beats\n";
    for (const auto& pr : rankings) {
      const auto& rep = pr.report;
      for (std::size_t i = 0; i < rep.methods.size(); ++i) {
        for (std::size_t j = 0; j < rep.methods.size(); ++j) {
          if (i == j) continue;
          out << format_double(pr.p) << ',' << rep.methods[i] << ',' << rep.methods[j] << ','
              << to_string(rep.test_used[i][j]) << ',' << format_double(rep.p_values[i][j]) << ','
              << (rep.beats[i][j] ? 1 : 0) << '\n';
        }
      }
    }
    finish(out, path);
  }
}

ExperimentResult read_runs_csv(const std::filesystem::path& path) {
  const CsvTable t = read_csv(path);
  const std::size_t c_method = t.column("method"), c_p = t.column("p"), c_run = t.column("run_index"),
                    c_mae = t.column("mae");
  const auto c_seed = std::find(t.header.begin(), t.header.end(), "seed") - t.header.begin();
  const auto c_iter = std::find(t.header.begin(), t.header.end(), "iterations") - t.header.begin();
  const auto width = static_cast<std::ptrdiff_t>(t.header.size());

  ExperimentResult res;
  for (const auto& row : t.rows) {
    RunRecord r;
    r.method = parse_method(row[c_method]);
    r.p = parse_double(row[c_p]);
    r.run_index = static_cast<int>(parse_double(row[c_run]));
    r.mae = parse_double(row[c_mae]);
    if (c_seed < width) r.seed = std::stoull(row[static_cast<std::size_t>(c_seed)]);
    if (c_iter < width) r.iterations = static_cast<int>(parse_double(row[static_cast<std::size_t>(c_iter)]));
    if (std::find(res.methods.begin(), res.methods.end(), r.method) == res.methods.end()) {
      res.methods.push_back(r.method);
    }
    if (std::find(res.p_values.begin(), res.p_values.end(), r.p) == res.p_values.end()) {
      res.p_values.push_back(r.p);
    }
    res.records.push_back(r);
  }
  if (res.records.empty()) throw IoError(path.string() + ": no runs");
  return res;
}

}  // namespace gridfill
