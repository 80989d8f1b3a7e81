#include "medfem/report.hpp"

#include "medfem/errors.hpp"
#include "medfem/snapshot.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>

namespace medfem {

namespace {

void check_finite_json(const nlohmann::ordered_json& j, const std::string& path) {
  if (j.is_number_float()) {
    const double v = j.get<double>();
    if (!std::isfinite(v))
      throw NumericError("report contains a non-finite number at " + path);
  } else if (j.is_object()) {
    for (const auto& [k, v] : j.items()) check_finite_json(v, path + "/" + k);
  } else if (j.is_array()) {
    int i = 0;
    for (const auto& v : j) check_finite_json(v, path + "/" + std::to_string(i++));
  }
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << content;
  if (!out) throw IoError("write failed: " + path);
}

}  // namespace

nlohmann::ordered_json curve_to_json(const Curve& curve) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& pt : curve.points) arr.push_back({pt.parameter, pt.value});
  return arr;
}

std::vector<std::string> emit_report(const RunReport& report, const OutputConfig& output) {
  check_finite_json(report.body, "");

  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(output.directory, ec);
  if (ec) throw IoError("cannot create output directory: " + output.directory);

  const std::string base = (fs::path(output.directory) / report.base_name()).string();
  const bool want_csv =
      std::find(output.formats.begin(), output.formats.end(), "csv") != output.formats.end();

  std::vector<std::string> written;

  const std::string doc_path = base + ".json";
  write_file(doc_path, report.body.dump(2) + "\n");
  written.push_back(doc_path);

  if (want_csv) {
    for (const Curve& curve : report.curves) {
      std::string csv = "parameter,value\n";
      for (const auto& pt : curve.points)
        csv += format_double(pt.parameter) + "," + format_double(pt.value) + "\n";
      const std::string path = base + "-" + curve.name + ".csv";
      write_file(path, csv);
      written.push_back(path);
    }
  }

  if (!report.solution_snapshot.empty()) {
    const std::string path = base + "-solution.txt";
    write_file(path, report.solution_snapshot);
    written.push_back(path);
  }

  if (!report.timings_text.empty())
    write_file(base + ".timings.txt", report.timings_text);

  return written;
}

}  // namespace medfem
