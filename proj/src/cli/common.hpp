#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

#include "cascade_vqa/fem_grid.hpp"
#include "cascade_vqa/qsim.hpp"
#include "cascade_vqa/vqa/cost.hpp"

namespace cvqa::cli {

using nlohmann::json;
namespace fs = std::filesystem;

/// A required input file or directory is absent or unreadable.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An output file or directory could not be written.
class OutputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Every run of a campaign failed.
class NoSuccessfulRuns : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

json read_json_file(const fs::path& path);
void write_text_file(const fs::path& path, const std::string& text);
void write_json_file(const fs::path& path, const json& j);
void ensure_directory(const fs::path& dir);
qsim::Statevector read_state_file(const fs::path& path);

/// Sets j[a][b]... = value, creating intermediate objects.
void set_path(json& j, std::initializer_list<const char*> keys, json value);

struct CampaignOptions {
  std::string config;
  std::optional<int> qubits;
  std::optional<std::string> family;
  std::optional<int> params;
  std::optional<int> reps;
  std::optional<std::string> final_layer;
  std::optional<std::string> strategy;
  std::optional<int> runs;
  std::optional<int> max_evals;
  std::optional<double> time_budget;
  std::optional<double> trust_radius;
  std::optional<std::string> method;
  std::optional<std::uint64_t> seed;
  std::optional<int> jobs;
  std::optional<std::string> output;
  std::optional<std::string> source;
  std::optional<double> min_source_accuracy;
};

struct SolveOptions {
  std::string config;
  std::optional<int> qubits;
  std::optional<std::string> output;
  bool export_mtx = false;
};

/// Where a stored state comes from and which grid it lives on.
struct StateOptions {
  std::string state;
  std::string campaign;
  std::string config;
};

struct SampleOptions {
  StateOptions input;
  std::uint64_t shots = 100000;
  std::uint64_t seed = 0;
  std::string output;
};

struct SliceOptions {
  StateOptions input;
  bool classical = false;
  std::string axis = "z";
  std::optional<int> layer;
  std::string format = "csv";
  int upsample = 1;
  std::string output;
};

int cmd_solve(const SolveOptions& opts, std::ostream& out, std::ostream& err);
int cmd_campaign(const CampaignOptions& opts, bool force_cascade, std::ostream& out,
                 std::ostream& err);
int cmd_sample(const SampleOptions& opts, std::ostream& out, std::ostream& err);
int cmd_metrics(const StateOptions& opts, std::ostream& out, std::ostream& err);
int cmd_slice(const SliceOptions& opts, std::ostream& out, std::ostream& err);

}  // namespace cvqa::cli
