#include "strips/io.h"

#include <cctype>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

#include "json.hpp"
#include "strips/domains.h"

namespace strips {

namespace {

using nlohmann::json;

json parse_json(std::string_view text, const char* what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw IoError(std::string(what) + ": " + e.what());
  }
}

std::vector<std::string> string_list(const json& object, const char* key, const char* what) {
  if (!object.contains(key) || !object.at(key).is_array()) {
    throw IoError(std::string(what) + ": missing array '" + key + "'");
  }
  std::vector<std::string> out;
  for (const auto& item : object.at(key)) {
    if (!item.is_string()) throw IoError(std::string(what) + ": '" + key + "' must hold strings");
    out.push_back(item.get<std::string>());
  }
  return out;
}

std::string required_string(const json& object, const char* key, const char* what) {
  if (!object.contains(key) || !object.at(key).is_string()) {
    throw IoError(std::string(what) + ": missing string '" + key + "'");
  }
  return object.at(key).get<std::string>();
}

json atom_names(const Domain& domain, std::span<const AtomId> ids) {
  json out = json::array();
  for (AtomId atom : ids) out.push_back(domain.atoms[atom]);
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::string format_double(double x) {
  std::ostringstream out;
  out << std::setprecision(17) << x;
  return out.str();
}

}  // namespace

std::string domain_to_json(const Domain& domain) {
  validate_domain(domain);
  json actions = json::array();
  for (const auto& action : domain.actions) {
    actions.push_back(json{{"name", action.name},
                           {"pre", atom_names(domain, action.pre)},
                           {"add", atom_names(domain, action.add)},
                           {"del", atom_names(domain, action.del)}});
  }
  json root{{"name", domain.name}, {"atoms", domain.atoms}, {"actions", std::move(actions)}};
  return root.dump(2) + "\n";
}

Domain domain_from_json(std::string_view text) {
  const json root = parse_json(text, "domain file");
  if (!root.is_object()) throw IoError("domain file: top level must be an object");
  const std::string name = required_string(root, "name", "domain file");
  std::vector<std::string> atoms = string_list(root, "atoms", "domain file");
  if (!root.contains("actions") || !root.at("actions").is_array()) {
    throw IoError("domain file: missing array 'actions'");
  }
  std::vector<NamedAction> actions;
  for (const auto& item : root.at("actions")) {
    if (!item.is_object()) throw IoError("domain file: actions must be objects");
    actions.push_back(NamedAction{required_string(item, "name", "domain action"),
                                  string_list(item, "pre", "domain action"),
                                  string_list(item, "add", "domain action"),
                                  string_list(item, "del", "domain action")});
  }
  return make_domain(name, std::move(atoms), actions);
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

void save_domain(const Domain& domain, const std::filesystem::path& path) {
  write_text_file(path, domain_to_json(domain));
}

Domain load_domain(const std::filesystem::path& path) {
  return domain_from_json(read_text_file(path));
}

Domain resolve_domain(std::string_view name_or_path) {
  if (is_builtin_domain(name_or_path)) return builtin_domain(name_or_path);
  const std::filesystem::path path{std::string(name_or_path)};
  if (std::filesystem::exists(path)) return load_domain(path);
  throw std::invalid_argument("'" + std::string(name_or_path) +
                              "' is neither a builtin domain nor a domain file");
}

void write_dataset(std::ostream& out, const Dataset& dataset, const Domain& domain) {
  out << "# domain " << dataset.domain_name << "\n";
  out << "# count " << dataset.config.count << "\n";
  out << "# negative_fraction " << format_double(dataset.config.negative_fraction) << "\n";
  out << "# max_length " << dataset.config.max_length << "\n";
  out << "# seed " << dataset.config.seed << "\n";
  out << "# unique " << (dataset.config.unique ? 1 : 0) << "\n";
  for (const auto& item : dataset.traces) {
    out << static_cast<int>(item.label) << '\t' << format_trace(domain, item.trace) << "\n";
  }
}

void save_dataset(const Dataset& dataset, const Domain& domain, const std::filesystem::path& path) {
  std::ostringstream out;
  write_dataset(out, dataset, domain);
  write_text_file(path, out.str());
}

DatasetFile read_dataset_file(std::istream& in) {
  DatasetFile file;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    std::string_view view = trim(line);
    if (view.empty()) continue;
    if (view.front() == '#') {
      view = trim(view.substr(1));
      const auto space = view.find_first_of(" \t");
      std::string key(view.substr(0, space));
      std::string value = space == std::string_view::npos ? "" : std::string(trim(view.substr(space)));
      file.header[key] = value;
      continue;
    }
    const auto tab = view.find_first_of(" \t");
    const std::string_view label = view.substr(0, tab);
    if (label != "0" && label != "1") {
      throw IoError("dataset line " + std::to_string(line_number) + ": label must be 0 or 1");
    }
    std::vector<std::string> names;
    if (tab != std::string_view::npos) {
      std::istringstream words{std::string(view.substr(tab))};
      std::string word;
      while (words >> word) names.push_back(word);
    }
    if (names.empty()) {
      throw IoError("dataset line " + std::to_string(line_number) + ": empty trace");
    }
    file.labels.push_back(label == "1" ? 1 : 0);
    file.records.push_back(std::move(names));
  }
  return file;
}

DatasetFile read_dataset_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  return read_dataset_file(in);
}

Dataset resolve_dataset(const DatasetFile& file, const Domain& domain) {
  Dataset dataset;
  auto header = [&](const std::string& key) -> const std::string* {
    auto it = file.header.find(key);
    return it == file.header.end() ? nullptr : &it->second;
  };
  dataset.domain_name = header("domain") ? *header("domain") : domain.name;
  try {
    if (auto* v = header("negative_fraction")) dataset.config.negative_fraction = std::stod(*v);
    if (auto* v = header("max_length")) dataset.config.max_length = std::stoull(*v);
    if (auto* v = header("seed")) dataset.config.seed = std::stoull(*v);
    if (auto* v = header("unique")) dataset.config.unique = *v != "0";
  } catch (const std::logic_error&) {
    throw IoError("dataset header holds a malformed number");
  }
  dataset.config.count = file.records.size();
  dataset.traces.reserve(file.records.size());
  for (std::size_t r = 0; r < file.records.size(); ++r) {
    Trace trace;
    for (const auto& name : file.records[r]) {
      auto id = domain.find_action(name);
      if (!id) {
        throw DomainError(DomainError::Kind::out_of_range,
                          "dataset record " + std::to_string(r + 1) + ": unknown action '" +
                              name + "' for domain " + domain.name);
      }
      trace.push_back(*id);
    }
    dataset.traces.push_back(LabeledTrace{std::move(trace), file.labels[r]});
  }
  return dataset;
}

std::string theta_to_json(const Theta& theta, std::span<const std::string> atom_names,
                          std::span<const std::string> action_names) {
  if (atom_names.size() != theta.heads() || action_names.size() != theta.actions()) {
    throw std::invalid_argument("theta_to_json: name lists do not match theta shape");
  }
  json values = json::array();
  for (std::size_t l = 0; l < theta.heads(); ++l) {
    json row = json::array();
    for (std::size_t m = 0; m < theta.actions(); ++m) {
      row.push_back(json::array(
          {theta(l, m, Theta::query), theta(l, m, Theta::key), theta(l, m, Theta::value)}));
    }
    values.push_back(std::move(row));
  }
  json root{{"atoms", std::vector<std::string>(atom_names.begin(), atom_names.end())},
            {"actions", std::vector<std::string>(action_names.begin(), action_names.end())},
            {"heads", theta.heads()},
            {"values", std::move(values)}};
  return root.dump(2) + "\n";
}

ThetaFile theta_from_json(std::string_view text) {
  const json root = parse_json(text, "theta file");
  if (!root.is_object()) throw IoError("theta file: top level must be an object");
  ThetaFile file;
  file.atoms = string_list(root, "atoms", "theta file");
  file.actions = string_list(root, "actions", "theta file");
  if (!root.contains("values") || !root.at("values").is_array()) {
    throw IoError("theta file: missing array 'values'");
  }
  const json& values = root.at("values");
  if (values.size() != file.atoms.size()) {
    throw IoError("theta file: values has " + std::to_string(values.size()) + " heads but " +
                  std::to_string(file.atoms.size()) + " atom names");
  }
  file.theta = Theta(file.atoms.size(), file.actions.size());
  for (std::size_t l = 0; l < values.size(); ++l) {
    if (!values[l].is_array() || values[l].size() != file.actions.size()) {
      throw IoError("theta file: head " + std::to_string(l) + " must list every action");
    }
    for (std::size_t m = 0; m < file.actions.size(); ++m) {
      const json& cell = values[l][m];
      if (!cell.is_array() || cell.size() != Theta::kComponents) {
        throw IoError("theta file: each entry must be [query, key, value]");
      }
      for (std::size_t k = 0; k < Theta::kComponents; ++k) {
        if (!cell[k].is_number()) throw IoError("theta file: entries must be numbers");
        file.theta(l, m, k) = cell[k].get<double>();
      }
    }
  }
  return file;
}

void save_theta(const Theta& theta, std::span<const std::string> atom_names,
                std::span<const std::string> action_names, const std::filesystem::path& path) {
  write_text_file(path, theta_to_json(theta, atom_names, action_names));
}

ThetaFile load_theta(const std::filesystem::path& path) {
  return theta_from_json(read_text_file(path));
}

std::string log_record_to_json(const LogRecord& record) {
  return json{{"step", record.step}, {"loss", record.loss}, {"train_accuracy", record.train_accuracy}}
      .dump();
}

Trace parse_trace(const Domain& domain, std::string_view text) {
  text = trim(text);
  // Grounded names such as stack(b1,b2) contain commas, so only separators
  // outside parentheses split names. Action names never start with '('.
  if (text.size() >= 2 && text.front() == '(' && text.back() == ')') {
    text = text.substr(1, text.size() - 2);
  }
  std::vector<std::string> words;
  std::string current;
  int depth = 0;
  for (char c : text) {
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (depth == 0 && (c == ',' || std::isspace(static_cast<unsigned char>(c)))) {
      if (!current.empty()) words.push_back(std::move(current));
      current.clear();
      continue;
    }
    current += c;
  }
  if (!current.empty()) words.push_back(std::move(current));

  Trace trace;
  for (const auto& word : words) {
    auto id = domain.find_action(word);
    if (!id) {
      throw DomainError(DomainError::Kind::out_of_range,
                        "unknown action '" + word + "' for domain " + domain.name);
    }
    trace.push_back(*id);
  }
  return trace;
}

std::string format_trace(const Domain& domain, std::span<const ActionId> trace) {
  validate_trace(domain, trace);
  std::string out;
  for (std::size_t i = 0; i < trace.size(); ++i) {
    if (i > 0) out += ' ';
    out += domain.actions[trace[i]].name;
  }
  return out;
}

}  // namespace strips
