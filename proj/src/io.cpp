#include "uclust/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "uclust/error.hpp"

namespace uclust {

using nlohmann::json;

namespace {

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

// One CSV record; double quotes group commas, "" is a literal quote.
std::vector<std::string> split_record(const std::string& line, std::size_t row) {
  std::vector<std::string> out;
  std::string cell;
  bool quoted = false, was_quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cell += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cell += c;
      }
    } else if (c == '"') {
      quoted = was_quoted = true;
    } else if (c == ',') {
      out.push_back(was_quoted ? cell : trim(cell));
      cell.clear();
      was_quoted = false;
    } else {
      cell += c;
    }
  }
  if (quoted) throw ParseError("row " + std::to_string(row) + ": unterminated quote");
  out.push_back(was_quoted ? cell : trim(cell));
  return out;
}

bool parse_double(const std::string& s, double& out) {
  if (s.empty()) return false;
  const char* b = s.data();
  const char* e = b + s.size();
  if (*b == '+') ++b;
  auto [p, ec] = std::from_chars(b, e, out);
  return ec == std::errc() && p == e;
}

std::string cell_ref(std::size_t row, std::size_t col) {
  return "row " + std::to_string(row) + ", column " + std::to_string(col);
}

}  // namespace

DataMatrix parse_csv(const std::string& text, const CsvOptions& options) {
  struct Line {
    std::size_t number;
    std::vector<std::string> cells;
  };
  std::vector<Line> lines;
  {
    std::istringstream in(text);
    std::string raw;
    std::size_t number = 0;
    while (std::getline(in, raw)) {
      ++number;
      if (number == 1 && raw.rfind("\xEF\xBB\xBF", 0) == 0) raw.erase(0, 3);
      if (trim(raw).empty()) continue;
      lines.push_back({number, split_record(raw, number)});
    }
  }
  if (lines.empty()) throw TooSmallError("CSV has no rows");

  const std::size_t width = lines.front().cells.size();
  for (const auto& l : lines)
    if (l.cells.size() != width)
      throw ParseError("row " + std::to_string(l.number) + " has " +
                       std::to_string(l.cells.size()) + " fields, expected " +
                       std::to_string(width));
  const std::size_t first = options.row_labels ? 1 : 0;
  if (width <= first) throw ParseError("CSV has no feature columns");

  bool header = options.header == HeaderMode::Present;
  if (options.header == HeaderMode::Auto) {
    double dummy;
    for (std::size_t c = first; c < width && !header; ++c)
      header = !parse_double(lines.front().cells[c], dummy);
  }
  std::vector<std::string> column_names;
  if (header) {
    column_names.assign(lines.front().cells.begin() + static_cast<std::ptrdiff_t>(first),
                        lines.front().cells.end());
    lines.erase(lines.begin());
  }

  const std::size_t rows = lines.size();
  const std::size_t cols = width - first;
  std::vector<double> values;
  values.reserve(rows * cols);
  std::vector<std::string> row_names;
  for (const auto& l : lines) {
    if (options.row_labels) row_names.push_back(l.cells[0]);
    for (std::size_t c = first; c < width; ++c) {
      const std::string& cell = l.cells[c];
      if (cell.empty()) throw ParseError(cell_ref(l.number, c + 1) + ": blank cell");
      double v;
      if (!parse_double(cell, v))
        throw ParseError(cell_ref(l.number, c + 1) + ": '" + cell + "' is not a number");
      if (!std::isfinite(v)) throw DomainError(cell_ref(l.number, c + 1) + ": non-finite value");
      values.push_back(v);
    }
  }

  if (!options.transpose) {
    if (rows < 2) throw TooSmallError("CSV needs at least 2 sample rows");
    return DataMatrix(rows, cols, std::move(values), std::move(row_names));
  }
  if (cols < 2) throw TooSmallError("CSV needs at least 2 sample columns");
  std::vector<double> t(values.size());
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) t[j * rows + i] = values[i * cols + j];
  return DataMatrix(cols, rows, std::move(t), std::move(column_names));
}

DataMatrix read_csv(const std::string& path, const CsvOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_csv(buf.str(), options);
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << content;
  out.flush();
  if (!out) throw IoError("failed writing '" + path + "'");
}

std::string format_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

DendrogramFormat dendrogram_format_from_string(const std::string& s) {
  if (s == "json") return DendrogramFormat::Json;
  if (s == "newick") return DendrogramFormat::Newick;
  if (s == "svg") return DendrogramFormat::Svg;
  throw ValidationError("unknown dendrogram format '" + s + "'");
}

namespace {

json opt(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json node_to_json(const DendrogramNode& n) {
  json j;
  j["members"] = n.members;
  j["alpha_i"] = n.alpha_i;
  j["p_value"] = opt(n.p_value);
  j["decision"] = to_string(n.decision);
  j["height"] = n.height;
  j["children"] = json::array();
  for (const auto& c : n.children) j["children"].push_back(node_to_json(c));
  return j;
}

DendrogramNode node_from_json(const json& j) {
  DendrogramNode n;
  n.members = j.at("members").get<std::vector<std::size_t>>();
  n.alpha_i = j.at("alpha_i").get<double>();
  if (!j.at("p_value").is_null()) n.p_value = j.at("p_value").get<double>();
  n.decision = node_decision_from_string(j.at("decision").get<std::string>());
  n.height = j.at("height").get<double>();
  for (const auto& c : j.at("children")) n.children.push_back(node_from_json(c));
  return n;
}

std::string label_of(std::size_t m, const std::vector<std::string>& labels) {
  return m < labels.size() ? labels[m] : std::to_string(m);
}

double envelope(const DendrogramNode& n) {
  double h = n.is_leaf() ? 0.0 : n.height;
  for (const auto& c : n.children) h = std::max(h, envelope(c));
  return h;
}

std::string newick_label(const std::string& s) {
  if (!s.empty() && s.find_first_of(" \t()[]':;,") == std::string::npos) return s;
  std::string out = "'";
  for (char c : s) {
    if (c == '\'') out += '\'';
    out += c;
  }
  return out + "'";
}

std::string annotation(const DendrogramNode& n) {
  std::string a = "[&";
  if (n.p_value) a += "p=" + format_number(*n.p_value) + ",";
  a += "alpha=" + format_number(n.alpha_i) + ",decision=" + to_string(n.decision) + "]";
  return a;
}

void newick(const DendrogramNode& n, const std::vector<std::string>& labels,
            const double* parent_env, std::string& out) {
  const double env = envelope(n);
  if (n.is_leaf()) {
    if (n.members.size() == 1) {
      out += newick_label(label_of(n.members.front(), labels));
    } else {
      out += '(';
      for (std::size_t i = 0; i < n.members.size(); ++i) {
        if (i) out += ',';
        out += newick_label(label_of(n.members[i], labels));
      }
      out += ')';
    }
  } else {
    out += '(';
    for (std::size_t i = 0; i < n.children.size(); ++i) {
      if (i) out += ',';
      newick(n.children[i], labels, &env, out);
    }
    out += ')';
  }
  out += annotation(n);
  if (parent_env) out += ":" + format_number(*parent_env - env);
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string short_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

}  // namespace

json dendrogram_to_json(const DendrogramNode& root, const std::vector<std::string>& labels) {
  json j;
  j["labels"] = labels;
  j["root"] = node_to_json(root);
  return j;
}

DendrogramNode dendrogram_from_json(const json& j) {
  try {
    return node_from_json(j.contains("root") ? j.at("root") : j);
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed dendrogram JSON: ") + e.what());
  }
}

std::string dendrogram_to_newick(const DendrogramNode& root,
                                 const std::vector<std::string>& labels) {
  std::string out;
  newick(root, labels, nullptr, out);
  return out + ";";
}

std::string dendrogram_to_svg(const DendrogramNode& root, const std::vector<std::string>& labels) {
  // Sample order follows a depth-first walk so that branches never cross.
  std::vector<std::size_t> order;
  std::function<void(const DendrogramNode&)> collect = [&](const DendrogramNode& n) {
    if (n.is_leaf()) {
      order.insert(order.end(), n.members.begin(), n.members.end());
    } else {
      for (const auto& c : n.children) collect(c);
    }
  };
  collect(root);
  std::map<std::size_t, std::size_t> slot;
  for (std::size_t i = 0; i < order.size(); ++i) slot[order[i]] = i;

  const double step = 28.0, left = 60.0, top = 50.0, plot = 300.0;
  const double base = top + plot;
  const double width = left * 2 + step * static_cast<double>(std::max<std::size_t>(order.size(), 2) - 1);
  const double height = base + 110.0;
  const double max_env = envelope(root);
  auto y_of = [&](double env) { return max_env > 0.0 ? base - plot * env / max_env : base; };
  auto x_of = [&](std::size_t member) { return left + step * static_cast<double>(slot.at(member)); };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  auto node_label = [&](const DendrogramNode& n, double x, double y) {
    if (n.p_value)
      svg << "<text x=\"" << x << "\" y=\"" << y - 16 << "\" text-anchor=\"middle\">p="
          << short_number(*n.p_value) << "</text>\n";
    if (n.decision != NodeDecision::TooSmall || n.p_value)
      svg << "<text x=\"" << x << "\" y=\"" << y - 4 << "\" text-anchor=\"middle\" fill=\"#555\">"
          << "&#945;=" << short_number(n.alpha_i) << "</text>\n";
  };

  // Returns the anchor point of the node.
  std::function<std::pair<double, double>(const DendrogramNode&)> draw =
      [&](const DendrogramNode& n) -> std::pair<double, double> {
    if (n.is_leaf()) {
      double lo = 1e300, hi = -1e300;
      for (auto m : n.members) {
        lo = std::min(lo, x_of(m));
        hi = std::max(hi, x_of(m));
        svg << "<line x1=\"" << x_of(m) << "\" y1=\"" << base << "\" x2=\"" << x_of(m)
            << "\" y2=\"" << base + 8 << "\" stroke=\"black\"/>\n";
        svg << "<text transform=\"translate(" << x_of(m) + 4 << "," << base + 14
            << ") rotate(90)\">" << xml_escape(label_of(m, labels)) << "</text>\n";
      }
      svg << "<line x1=\"" << lo << "\" y1=\"" << base << "\" x2=\"" << hi << "\" y2=\"" << base
          << "\" stroke=\"black\" stroke-width=\"3\"/>\n";
      const double x = 0.5 * (lo + hi);
      node_label(n, x, base);
      return {x, base};
    }
    const double y = y_of(envelope(n));
    std::vector<std::pair<double, double>> kids;
    for (const auto& c : n.children) kids.push_back(draw(c));
    double lo = 1e300, hi = -1e300, sum = 0.0;
    for (auto [cx, cy] : kids) {
      svg << "<line x1=\"" << cx << "\" y1=\"" << cy << "\" x2=\"" << cx << "\" y2=\"" << y
          << "\" stroke=\"black\"/>\n";
      lo = std::min(lo, cx);
      hi = std::max(hi, cx);
      sum += cx;
    }
    svg << "<line x1=\"" << lo << "\" y1=\"" << y << "\" x2=\"" << hi << "\" y2=\"" << y
        << "\" stroke=\"black\"/>\n";
    const double x = sum / static_cast<double>(kids.size());
    node_label(n, x, y);
    return {x, y};
  };
  draw(root);
  svg << "</svg>\n";
  return svg.str();
}

std::string render_dendrogram(const DendrogramNode& root, DendrogramFormat format,
                              const std::vector<std::string>& labels) {
  switch (format) {
    case DendrogramFormat::Json: return dendrogram_to_json(root, labels).dump(2) + "\n";
    case DendrogramFormat::Newick: return dendrogram_to_newick(root, labels) + "\n";
    case DendrogramFormat::Svg: return dendrogram_to_svg(root, labels);
  }
  return {};
}

void write_dendrogram(const DendrogramNode& root, DendrogramFormat format, const std::string& path,
                      const std::vector<std::string>& labels) {
  write_text_file(path, render_dendrogram(root, format, labels));
}

json partition_to_json(const Partition& p, const std::vector<std::string>& labels) {
  json j;
  j["n1"] = p.n1();
  j["assignment"] = p.assignment();
  json g1 = json::array(), g2 = json::array();
  for (std::size_t i = 0; i < p.size(); ++i)
    (p.label(i) == 1 ? g1 : g2).push_back(label_of(i, labels));
  j["group1"] = g1;
  j["group2"] = g2;
  return j;
}

json test_result_to_json(const TestResult& r, const std::vector<std::string>& labels) {
  json j;
  j["verdict"] = r.reject ? "split" : "homogeneous";
  j["statistic"] = r.statistic;
  j["p_value"] = r.p_value;
  j["method"] = to_string(r.method);
  j["alpha"] = r.alpha;
  j["reject"] = r.reject;
  j["n_star"] = {{"log", r.n_star.log_value},
                 {"exact", r.n_star.exact ? json(*r.n_star.exact) : json(nullptr)}};
  j["partition"] = partition_to_json(r.best_partition, labels);
  j["bn"] = {{"bn", r.bn.bn},
             {"n1", r.bn.n1},
             {"variance", r.bn.variance},
             {"standardized", r.bn.standardized}};
  j["warnings"] = r.warnings;
  return j;
}

json uclust_result_to_json(const UclustResult& r, const std::vector<std::string>& labels) {
  json j;
  j["verdict"] = to_string(r.verdict);
  j["alpha"] = r.alpha;
  j["partition"] = r.partition ? partition_to_json(*r.partition, labels) : json(nullptr);
  j["homogeneity"] = test_result_to_json(r.homogeneity, labels);
  j["per_size_candidates"] = json::array();
  for (const auto& c : r.per_size_candidates)
    j["per_size_candidates"].push_back({{"n1", c.n1},
                                        {"bn", c.bn},
                                        {"standardized", c.standardized},
                                        {"p_value", c.p_value},
                                        {"significant", c.significant},
                                        {"partition", partition_to_json(c.partition, labels)}});
  j["warnings"] = r.warnings;
  return j;
}

namespace {

StudySpec homogeneity_preset(std::size_t n, std::size_t L, double m2) {
  StudySpec s;
  s.kind = StudySpec::Kind::Homogeneity;
  s.scenario = SimScenario::two_group(n, L, m2, 200, 1);
  return s;
}

StudySpec hierarchy_preset(std::size_t k, MeanLayout layout, double d, std::size_t L,
                           int replications) {
  StudySpec s;
  s.kind = StudySpec::Kind::Hierarchy;
  s.scenario = SimScenario::clusters(k, 10, L, layout, d, replications, 1);
  return s;
}

const std::map<std::string, std::function<StudySpec()>>& presets() {
  static const std::map<std::string, std::function<StudySpec()>> table = {
      {"homog-l500-n10-m0.00", [] { return homogeneity_preset(10, 500, 0.0); }},
      {"homog-l500-n10-m0.50", [] { return homogeneity_preset(10, 500, 0.5); }},
      {"homog-l1000-n20-m0.25", [] { return homogeneity_preset(20, 1000, 0.25); }},
      {"homog-l2000-n50-m0.00", [] { return homogeneity_preset(50, 2000, 0.0); }},
      {"equi-k3-d0.6", [] { return hierarchy_preset(3, MeanLayout::Equidistant, 0.6, 2500, 20); }},
      {"equi-k7-d0.4", [] { return hierarchy_preset(7, MeanLayout::Equidistant, 0.4, 2500, 20); }},
      {"inline-k3-d0.2", [] { return hierarchy_preset(3, MeanLayout::Inline, 0.2, 2500, 20); }},
      {"inline-k3-d0.4", [] { return hierarchy_preset(3, MeanLayout::Inline, 0.4, 2500, 20); }},
      {"fwer-n30-l1000",
       [] {
         StudySpec s;
         s.kind = StudySpec::Kind::Hierarchy;
         s.scenario = SimScenario::clusters(1, 30, 1000, MeanLayout::Inline, 0.0, 200, 1);
         return s;
       }},
  };
  return table;
}

}  // namespace

std::vector<std::string> scenario_preset_names() {
  std::vector<std::string> out;
  for (const auto& [name, f] : presets()) out.push_back(name);
  return out;
}

StudySpec scenario_preset(const std::string& name) {
  auto it = presets().find(name);
  if (it == presets().end()) throw ValidationError("unknown scenario preset '" + name + "'");
  return it->second();
}

StudySpec study_from_json(const json& j) {
  static const std::set<std::string> known = {"study", "n",     "L",           "k",
                                              "n1",    "group_sizes", "layout", "shift",
                                              "noise", "replications", "seed",  "alpha",
                                              "tau"};
  if (!j.is_object()) throw ValidationError("scenario must be a JSON object");
  for (const auto& [key, value] : j.items())
    if (!known.count(key)) throw ValidationError("unknown scenario field '" + key + "'");
  try {
    StudySpec s;
    const std::string study = j.value("study", std::string("homogeneity"));
    if (study == "homogeneity") {
      s.kind = StudySpec::Kind::Homogeneity;
    } else if (study == "hierarchy") {
      s.kind = StudySpec::Kind::Hierarchy;
    } else {
      throw ValidationError("unknown study '" + study + "'");
    }
    SimScenario& sc = s.scenario;
    sc.mean_layout = mean_layout_from_string(
        j.value("layout", std::string(s.kind == StudySpec::Kind::Homogeneity ? "two-group-shift"
                                                                              : "equidistant")));
    sc.L = j.at("L").get<std::size_t>();
    sc.shift = j.value("shift", 0.0);
    sc.noise = noise_law_from_string(j.value("noise", std::string("normal")));
    sc.replications = j.value("replications", s.kind == StudySpec::Kind::Homogeneity ? 200 : 20);
    sc.seed = j.value("seed", std::uint64_t{1});
    if (j.contains("group_sizes")) {
      sc.group_sizes = j.at("group_sizes").get<std::vector<std::size_t>>();
      sc.k = sc.group_sizes.size();
    } else if (sc.mean_layout == MeanLayout::TwoGroupShift) {
      const std::size_t n = j.at("n").get<std::size_t>();
      sc.k = 2;
      sc.group_sizes = {n - n / 2, n / 2};
    } else {
      sc.k = j.at("k").get<std::size_t>();
      sc.group_sizes.assign(sc.k, j.at("n1").get<std::size_t>());
    }
    sc.n = 0;
    for (auto g : sc.group_sizes) sc.n += g;
    if (j.contains("n") && j.at("n").get<std::size_t>() != sc.n)
      throw ValidationError("n disagrees with the group sizes");
    if (j.contains("k") && j.at("k").get<std::size_t>() != sc.k)
      throw ValidationError("k disagrees with the group sizes");
    s.alpha = j.value("alpha", 0.05);
    s.tau = j.value("tau", std::size_t{3});
    if (!(s.alpha > 0.0 && s.alpha < 1.0)) throw ValidationError("alpha must lie in (0, 1)");
    sc.validate();
    return s;
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed scenario: ") + e.what());
  } catch (const ParseError& e) {
    throw ValidationError(e.what());
  }
}

json study_to_json(const StudySpec& s) {
  const SimScenario& sc = s.scenario;
  return {{"study", s.kind == StudySpec::Kind::Homogeneity ? "homogeneity" : "hierarchy"},
          {"n", sc.n},
          {"L", sc.L},
          {"k", sc.k},
          {"group_sizes", sc.group_sizes},
          {"layout", to_string(sc.mean_layout)},
          {"shift", sc.shift},
          {"noise", to_string(sc.noise)},
          {"replications", sc.replications},
          {"seed", sc.seed},
          {"alpha", s.alpha},
          {"tau", s.tau}};
}

json sim_report_to_json(const SimReport& r, const StudySpec& spec) {
  const int re = r.scenario.replications;
  auto with_se = [&](const std::optional<double>& p) {
    return p ? json{{"rate", *p}, {"se", binomial_se(*p, re)}} : json(nullptr);
  };
  json j;
  j["study"] = study_to_json(spec);
  j["rejection_rate"] = with_se(r.rejection_rate);
  j["rejection_rate_max"] = with_se(r.rejection_rate_max);
  j["rejection_rate_gumbel"] = with_se(r.rejection_rate_gumbel);
  j["mean_ari"] = opt(r.mean_ari);
  j["mean_k_hat"] = opt(r.mean_k_hat);
  j["per_replication"] = json::array();
  for (const auto& rec : r.per_replication)
    j["per_replication"].push_back({{"replication", rec.replication},
                                    {"statistic", rec.statistic},
                                    {"p_max", rec.p_max},
                                    {"p_gumbel", rec.p_gumbel},
                                    {"reject_max", rec.reject_max},
                                    {"reject_gumbel", rec.reject_gumbel},
                                    {"reject", rec.reject},
                                    {"ari", opt(rec.ari)},
                                    {"k_hat", rec.k_hat ? json(*rec.k_hat) : json(nullptr)}});
  return j;
}

std::string sim_records_csv(const SimReport& r) {
  std::ostringstream out;
  out << "replication,statistic,p_max,p_gumbel,reject_max,reject_gumbel,reject,ari,k_hat\n";
  for (const auto& rec : r.per_replication) {
    out << rec.replication << ',' << format_number(rec.statistic) << ','
        << format_number(rec.p_max) << ',' << format_number(rec.p_gumbel) << ','
        << rec.reject_max << ',' << rec.reject_gumbel << ',' << rec.reject << ','
        << (rec.ari ? format_number(*rec.ari) : "") << ','
        << (rec.k_hat ? std::to_string(*rec.k_hat) : "") << '\n';
  }
  return out.str();
}

std::string sim_report_table(const SimReport& r, const StudySpec& spec) {
  const SimScenario& sc = r.scenario;
  std::ostringstream out;
  char buf[160];
  std::snprintf(buf, sizeof buf, "study=%s layout=%s noise=%s n=%zu L=%zu k=%zu shift=%g Re=%d alpha=%g\n",
                spec.kind == StudySpec::Kind::Homogeneity ? "homogeneity" : "hierarchy",
                to_string(sc.mean_layout), to_string(sc.noise), sc.n, sc.L, sc.k, sc.shift,
                sc.replications, r.alpha);
  out << buf;
  auto rate = [&](const char* name, const std::optional<double>& p) {
    if (!p) return;
    std::snprintf(buf, sizeof buf, "  %-22s %.3f (se %.3f)\n", name, *p,
                  binomial_se(*p, sc.replications));
    out << buf;
  };
  rate("rejection (max test)", r.rejection_rate_max);
  rate("rejection (gumbel)", r.rejection_rate_gumbel);
  rate(spec.kind == StudySpec::Kind::Homogeneity ? "rejection (auto)" : "root split rate",
       r.rejection_rate);
  if (r.mean_ari) {
    std::snprintf(buf, sizeof buf, "  %-22s %.3f\n", "mean ARI", *r.mean_ari);
    out << buf;
  }
  if (r.mean_k_hat) {
    std::snprintf(buf, sizeof buf, "  %-22s %.3f\n", "mean K", *r.mean_k_hat);
    out << buf;
  }
  return out.str();
}

}  // namespace uclust
