#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "strips/datagen.h"
#include "strips/domain.h"
#include "strips/training.h"
#include "strips/transformer.h"

namespace strips {

// Malformed files and failed reads or writes.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Domain files are JSON objects with sorted keys:
//   {"actions": [{"add": [...], "del": [...], "name": ..., "pre": [...]}],
//    "atoms": [...], "name": ...}
// List order defines atom and action indices.
std::string domain_to_json(const Domain& domain);
Domain domain_from_json(std::string_view text);

void save_domain(const Domain& domain, const std::filesystem::path& path);
Domain load_domain(const std::filesystem::path& path);

// A builtin name (see builtin_domain) or a path to a domain file.
Domain resolve_domain(std::string_view name_or_path);

// Dataset files: "# key value" header lines, then one record per line,
// "<label>\t<action> <action> ...".
void write_dataset(std::ostream& out, const Dataset& dataset, const Domain& domain);
void save_dataset(const Dataset& dataset, const Domain& domain, const std::filesystem::path& path);

struct DatasetFile {
  std::map<std::string, std::string> header;
  std::vector<std::uint8_t> labels;
  std::vector<std::vector<std::string>> records;
};

DatasetFile read_dataset_file(std::istream& in);
DatasetFile read_dataset_file(const std::filesystem::path& path);

// Resolves action names against `domain`. Throws DomainError for unknown
// names.
Dataset resolve_dataset(const DatasetFile& file, const Domain& domain);

// Theta files are JSON: atom and action names plus values[head][action] =
// [query, key, value] at full precision.
std::string theta_to_json(const Theta& theta, std::span<const std::string> atom_names,
                          std::span<const std::string> action_names);

struct ThetaFile {
  Theta theta;
  std::vector<std::string> atoms;
  std::vector<std::string> actions;
};

ThetaFile theta_from_json(std::string_view text);

void save_theta(const Theta& theta, std::span<const std::string> atom_names,
                std::span<const std::string> action_names, const std::filesystem::path& path);
ThetaFile load_theta(const std::filesystem::path& path);

// One JSON object per line: {"loss": ..., "step": ..., "train_accuracy": ...}.
std::string log_record_to_json(const LogRecord& record);

// Accepts action names separated by spaces and/or commas, optionally wrapped
// in parentheses, e.g. "(a,c,c,b)". Commas inside a grounded name such as
// stack(b1,b2) do not split it.
Trace parse_trace(const Domain& domain, std::string_view text);
std::string format_trace(const Domain& domain, std::span<const ActionId> trace);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace strips
