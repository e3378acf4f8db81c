#include "strips/experiment.h"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "strips/datagen.h"
#include "strips/domains.h"
#include "strips/equivalence.h"
#include "strips/io.h"
#include "strips/transformer.h"

namespace strips {

namespace {

// splitmix64 finaliser; derives independent dataset seeds from data_seed.
std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
  std::uint64_t z = a + 0x9e3779b97f4a7c15ULL * (b + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t kTestStream = 0xffffffffULL;

std::string number(double x) {
  std::ostringstream out;
  out << std::setprecision(10) << x;
  return out.str();
}

std::string fixed(double x, int digits) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(digits) << x;
  return out.str();
}

std::vector<std::string> head_names(const Domain& domain, std::size_t heads) {
  if (heads == domain.atom_count()) return domain.atoms;
  std::vector<std::string> names;
  for (std::size_t l = 0; l < heads; ++l) names.push_back("f" + std::to_string(l + 1));
  return names;
}

struct Cell {
  std::size_t size_index;
  std::uint64_t seed;
};

}  // namespace

void ExperimentSpec::validate() const {
  if (sizes.empty()) throw std::invalid_argument("experiment needs at least one training size");
  if (seeds.empty()) throw std::invalid_argument("experiment needs at least one seed");
  if (test_max_length < 2 && test_negatives > 0) {
    throw std::invalid_argument("test negatives need max length >= 2");
  }
  if (heads && *heads == 0) throw std::invalid_argument("heads must be positive");
  if (jobs == 0) throw std::invalid_argument("jobs must be positive");
  train.validate();
  loss.validate();
}

ExperimentReport run_experiment(const ExperimentSpec& spec, const RowObserver& observer) {
  spec.validate();
  const Domain truth = resolve_domain(spec.domain);
  const std::size_t heads = spec.heads.value_or(truth.atom_count());
  const std::vector<std::string> atom_names = head_names(truth, heads);
  const std::vector<std::string> action_names = truth.action_names();
  const std::size_t max_length = spec.max_length.value_or(default_max_length(truth.name));

  // Datasets are shared by all seeds of a size. A generation failure is
  // recorded on every row that needed the dataset.
  std::vector<std::optional<Dataset>> train_sets(spec.sizes.size());
  std::vector<std::string> train_errors(spec.sizes.size());
  for (std::size_t s = 0; s < spec.sizes.size(); ++s) {
    DatasetConfig config;
    config.count = spec.sizes[s];
    config.max_length = max_length;
    config.seed = mix(spec.data_seed, spec.sizes[s]);
    try {
      train_sets[s] = build_dataset(truth, config);
    } catch (const std::exception& e) {
      train_errors[s] = e.what();
    }
  }

  std::optional<Dataset> test_set;
  std::string test_error;
  {
    DatasetConfig config;
    config.count = spec.test_positives + spec.test_negatives;
    config.negative_fraction =
        config.count == 0 ? 0.0
                          : static_cast<double>(spec.test_negatives) / static_cast<double>(config.count);
    config.max_length = spec.test_max_length;
    config.seed = mix(spec.data_seed, kTestStream);
    config.unique = false;
    try {
      test_set = build_dataset(truth, config);
    } catch (const std::exception& e) {
      test_error = e.what();
    }
  }

  std::vector<Cell> cells;
  for (std::size_t s = 0; s < spec.sizes.size(); ++s) {
    for (std::uint64_t seed : spec.seeds) cells.push_back({s, seed});
  }

  ExperimentReport report;
  report.rows.resize(cells.size());
  std::mutex observer_mutex;

  auto run_cell = [&](std::size_t index) {
    const Cell& cell = cells[index];
    ReportRow row;
    row.domain = truth.name;
    row.size = spec.sizes[cell.size_index];
    row.seed = cell.seed;
    const auto start = std::chrono::steady_clock::now();
    try {
      if (!train_sets[cell.size_index]) throw std::runtime_error(train_errors[cell.size_index]);
      if (!test_set) throw std::runtime_error("test set: " + test_error);
      TrainConfig config = spec.train;
      config.seed = cell.seed;
      const TrainResult result =
          train(*train_sets[cell.size_index], heads, truth.action_count(), config, spec.loss);
      row.steps = result.steps;
      row.train_accuracy = result.train_stats.accuracy();
      row.test_accuracy = evaluate(result.binary, test_set->traces, truth).accuracy();
      const Domain learned = extract_model(result.binary, atom_names, action_names, "learned");
      EquivalenceOptions options;
      options.max_states = spec.recovery_max_states;
      options.seed = cell.seed;
      row.exact_recovery = check_equivalence(learned, truth, options).equivalent;
    } catch (const std::exception& e) {
      row.error = e.what();
    }
    row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    report.rows[index] = row;
    if (observer) {
      std::lock_guard<std::mutex> lock(observer_mutex);
      observer(report.rows[index]);
    }
  };

  const std::size_t workers = std::min(spec.jobs, cells.size());
  if (workers <= 1) {
    for (std::size_t i = 0; i < cells.size(); ++i) run_cell(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < cells.size(); i = next++) run_cell(i);
      });
    }
    for (auto& t : pool) t.join();
  }

  report.aggregates = aggregate(report.rows);
  return report;
}

std::vector<AggregateRow> aggregate(const std::vector<ReportRow>& rows) {
  std::vector<AggregateRow> out;
  std::map<std::pair<std::string, std::size_t>, std::vector<const ReportRow*>> groups;
  std::vector<std::pair<std::string, std::size_t>> order;
  for (const auto& row : rows) {
    auto key = std::make_pair(row.domain, row.size);
    auto [it, inserted] = groups.try_emplace(key);
    if (inserted) order.push_back(key);
    it->second.push_back(&row);
  }
  for (const auto& key : order) {
    AggregateRow agg;
    agg.domain = key.first;
    agg.size = key.second;
    std::vector<const ReportRow*> ok;
    for (const ReportRow* row : groups[key]) {
      if (row->error) {
        ++agg.failures;
      } else {
        ok.push_back(row);
      }
    }
    agg.runs = ok.size();
    if (!ok.empty()) {
      double train_sum = 0.0;
      double test_sum = 0.0;
      const ReportRow* best = ok.front();
      for (const ReportRow* row : ok) {
        train_sum += row->train_accuracy;
        test_sum += row->test_accuracy;
        if (row->exact_recovery) ++agg.recovered;
        if (row->train_accuracy > best->train_accuracy ||
            (row->train_accuracy == best->train_accuracy && row->seed < best->seed)) {
          best = row;
        }
      }
      const double n = static_cast<double>(ok.size());
      agg.train_mean = train_sum / n;
      agg.test_mean = test_sum / n;
      double train_var = 0.0;
      double test_var = 0.0;
      for (const ReportRow* row : ok) {
        train_var += (row->train_accuracy - agg.train_mean) * (row->train_accuracy - agg.train_mean);
        test_var += (row->test_accuracy - agg.test_mean) * (row->test_accuracy - agg.test_mean);
      }
      agg.train_std = std::sqrt(train_var / n);
      agg.test_std = std::sqrt(test_var / n);
      agg.best_seed = best->seed;
      agg.best_train = best->train_accuracy;
      agg.best_test = best->test_accuracy;
      agg.best_recovered = best->exact_recovery;
    }
    out.push_back(agg);
  }
  return out;
}

void write_report_csv(std::ostream& out, const ExperimentReport& report) {
  out << "domain,size,seed,train_acc,test_acc,exact_recovery,seconds\n";
  for (const auto& row : report.rows) {
    out << row.domain << ',' << row.size << ',' << row.seed << ',';
    if (row.error) {
      out << ",,error,";
    } else {
      out << number(row.train_accuracy) << ',' << number(row.test_accuracy) << ','
          << (row.exact_recovery ? "true" : "false") << ',';
    }
    out << fixed(row.seconds, 3) << '\n';
  }
  for (const auto& agg : report.aggregates) {
    if (agg.runs == 0) continue;
    double seconds = 0.0;
    for (const auto& row : report.rows) {
      if (row.domain == agg.domain && row.size == agg.size) seconds += row.seconds;
    }
    const std::string prefix = agg.domain + ',' + std::to_string(agg.size) + ',';
    out << prefix << "mean," << number(agg.train_mean) << ',' << number(agg.test_mean) << ','
        << agg.recovered << '/' << agg.runs << ',' << fixed(seconds, 3) << '\n';
    out << prefix << "std," << number(agg.train_std) << ',' << number(agg.test_std) << ",,\n";
    out << prefix << "best:" << agg.best_seed << ',' << number(agg.best_train) << ','
        << number(agg.best_test) << ',' << (agg.best_recovered ? "true" : "false") << ",\n";
  }
}

void write_report_table(std::ostream& out, const ExperimentReport& report) {
  out << std::left << std::setw(16) << "domain" << std::right << std::setw(6) << "size"
      << "  " << std::left << std::setw(22) << "train" << std::setw(22) << "test"
      << "recovered\n";
  for (const auto& agg : report.aggregates) {
    out << std::left << std::setw(16) << agg.domain << std::right << std::setw(6) << agg.size
        << "  ";
    if (agg.runs == 0) {
      std::string reason = "all runs failed";
      for (const auto& row : report.rows) {
        if (row.domain == agg.domain && row.size == agg.size && row.error) {
          reason = *row.error;
          break;
        }
      }
      out << "- (" << reason << ")\n";
      continue;
    }
    const std::string train = fixed(agg.train_mean, 3) + "±" + fixed(agg.train_std, 3) + " (" +
                              fixed(agg.best_train, 3) + ")";
    const std::string test = fixed(agg.test_mean, 3) + "±" + fixed(agg.test_std, 3) + " (" +
                             fixed(agg.best_test, 3) + ")";
    // setw counts bytes and "±" is two.
    out << std::left << std::setw(23) << train << std::setw(23) << test << agg.recovered << '/'
        << agg.runs;
    if (agg.failures > 0) out << "  [" << agg.failures << " failed]";
    out << '\n';
  }
}

}  // namespace strips
