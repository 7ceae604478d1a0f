#include "mee/params_io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace mee {

namespace {

using nlohmann::json;

double need_num(const json& j, const char* field, const std::string& where) {
  if (!j.contains(field))
    throw std::invalid_argument("missing required field " + std::string(field) + where);
  const json& v = j.at(field);
  if (!v.is_number())
    throw std::invalid_argument("field " + std::string(field) + where + ": expected a number");
  return v.get<double>();
}

int need_int(const json& j, const char* field, const std::string& where) {
  if (!j.contains(field))
    throw std::invalid_argument("missing required field " + std::string(field) + where);
  const json& v = j.at(field);
  if (!v.is_number_integer())
    throw std::invalid_argument("field " + std::string(field) + where + ": expected an integer");
  return v.get<int>();
}

PopulationSummary summary_from(const json& j, const std::string& where) {
  PopulationSummary s;
  s.mu_y = need_num(j, "mu_y", where);
  s.mu_x = need_num(j, "mu_x", where);
  s.sigma2_y = need_num(j, "sigma2_y", where);
  s.sigma2_x = need_num(j, "sigma2_x", where);
  s.rho = need_num(j, "rho", where);
  s.sigma2_u = need_num(j, "sigma2_u", where);
  s.sigma2_v = need_num(j, "sigma2_v", where);
  s.n = need_int(j, "n", where);
  return s;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  std::stringstream ss(line);
  while (std::getline(ss, cur, ',')) out.push_back(trim(cur));
  return out;
}

double parse_double(const std::string& tok, long line_no) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(tok, &pos);
    if (pos != tok.size()) throw std::invalid_argument("");
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("data line " + std::to_string(line_no) +
                                ": not a number: " + tok);
  }
}

}  // namespace

Params parse_params(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("params: ") + e.what());
  }
  if (!j.is_object()) throw std::invalid_argument("params: expected a JSON object");

  if (j.contains("strata")) {
    const json& arr = j.at("strata");
    if (!arr.is_array() || arr.empty())
      throw std::invalid_argument("strata: expected a non-empty array");
    std::vector<StratumSummary> strata;
    int idx = 1;
    for (const json& js : arr) {
      const std::string where = " in stratum " + std::to_string(idx);
      if (!js.is_object()) throw std::invalid_argument("stratum" + where + ": expected an object");
      StratumSummary h;
      h.w = need_num(js, "w", where);
      h.n_h = need_int(js, "n_h", where);
      h.mu_y = need_num(js, "mu_y", where);
      h.mu_x = need_num(js, "mu_x", where);
      h.sigma2_y = need_num(js, "sigma2_y", where);
      h.sigma2_x = need_num(js, "sigma2_x", where);
      h.rho = need_num(js, "rho", where);
      h.sigma2_u = need_num(js, "sigma2_u", where);
      h.sigma2_v = need_num(js, "sigma2_v", where);
      strata.push_back(h);
      ++idx;
    }
    return StratifiedDesign(std::move(strata));
  }

  PopulationSummary s = summary_from(j, "");
  validate_summary(s);
  return s;
}

Params load_params(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open params file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_params(buf.str());
}

SampleData parse_data_csv(const std::string& text) {
  std::stringstream ss(text);
  std::string line;
  long line_no = 0;
  bool stratified = false;
  SampleData d;
  while (std::getline(ss, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty()) continue;
    const auto fields = split_fields(t);
    if (line_no == 1) {
      if (fields == std::vector<std::string>{"y", "x"}) {
        stratified = false;
      } else if (fields == std::vector<std::string>{"stratum", "y", "x"}) {
        stratified = true;
      } else {
        throw std::invalid_argument("data: first line must be 'y,x' or 'stratum,y,x'");
      }
      continue;
    }
    const std::size_t want = stratified ? 3 : 2;
    if (fields.size() != want)
      throw std::invalid_argument("data line " + std::to_string(line_no) + ": expected " +
                                  std::to_string(want) + " fields");
    std::size_t k = 0;
    if (stratified) {
      const double raw = parse_double(fields[k++], line_no);
      const int idx = static_cast<int>(raw);
      if (raw != idx || idx < 1)
        throw std::invalid_argument("data line " + std::to_string(line_no) +
                                    ": stratum must be a positive integer");
      d.stratum.push_back(idx);
    }
    d.y.push_back(parse_double(fields[k++], line_no));
    d.x.push_back(parse_double(fields[k++], line_no));
  }
  if (line_no == 0) throw std::invalid_argument("data: empty input");
  if (d.y.empty()) throw std::invalid_argument("data: no rows");
  return d;
}

SampleData load_data_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open data file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_data_csv(buf.str());
}

SampleStats sample_stats(const SampleData& data) {
  if (data.is_stratified())
    throw std::invalid_argument("data: stratified rows need a stratified design");
  double sy = 0, sx = 0;
  for (std::size_t i = 0; i < data.y.size(); ++i) {
    sy += data.y[i];
    sx += data.x[i];
  }
  const double n = static_cast<double>(data.y.size());
  return {sy / n, sx / n, static_cast<int>(data.y.size())};
}

void stratified_sample_means(const SampleData& data, const StratifiedDesign& d,
                             double& ybar_st, double& xbar_st) {
  if (!data.is_stratified())
    throw std::invalid_argument("data: stratum column required for a stratified design");
  const std::size_t L = d.size();
  std::vector<double> sy(L, 0), sx(L, 0);
  std::vector<long> cnt(L, 0);
  for (std::size_t i = 0; i < data.y.size(); ++i) {
    const int h = data.stratum[i];
    if (h < 1 || static_cast<std::size_t>(h) > L)
      throw std::invalid_argument("data: stratum " + std::to_string(h) +
                                  " is outside the design (1.." + std::to_string(L) + ")");
    sy[h - 1] += data.y[i];
    sx[h - 1] += data.x[i];
    ++cnt[h - 1];
  }
  ybar_st = 0;
  xbar_st = 0;
  for (std::size_t h = 0; h < L; ++h) {
    if (cnt[h] == 0)
      throw std::invalid_argument("data: stratum " + std::to_string(h + 1) + " has no rows");
    const double w = d.strata()[h].w;
    ybar_st += w * sy[h] / static_cast<double>(cnt[h]);
    xbar_st += w * sx[h] / static_cast<double>(cnt[h]);
  }
}

}  // namespace mee
