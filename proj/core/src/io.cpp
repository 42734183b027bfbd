#include "mgmapf/io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <random>
#include <set>
#include <sstream>

#include "mgmapf/errors.hpp"

namespace mgmapf {
namespace {

bool next_line(std::istream& in, std::string& line, int& lineno) {
  if (!std::getline(in, line)) return false;
  ++lineno;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return true;
}

std::vector<std::string> split_ws(const std::string& line) {
  std::istringstream is(line);
  std::vector<std::string> out;
  for (std::string tok; is >> tok;) out.push_back(tok);
  return out;
}

template <typename T>
T to_number(const std::string& s, int lineno, const char* what) {
  T value{};
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw ParseError(lineno, std::string("bad ") + what + " '" + s + "'");
  return value;
}

double to_double(const std::string& s, int lineno) {
  try {
    std::size_t used = 0;
    double d = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return d;
  } catch (const std::exception&) {
    throw ParseError(lineno, "bad optimal length '" + s + "'");
  }
}

std::ifstream open_or_throw(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw Error("cannot open " + file.string());
  return in;
}

// Rejection sampling over raw 64-bit draws so generated instances do not
// depend on the standard library's distribution implementation.
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t n) {
  const std::uint64_t max = std::numeric_limits<std::uint64_t>::max();
  const std::uint64_t limit = max - (max % n + 1) % n;
  for (;;) {
    std::uint64_t x = rng();
    if (x <= limit) return x % n;
  }
}

}  // namespace

Graph parse_map(std::istream& in) {
  std::string line;
  int lineno = 0;
  int height = -1, width = -1;
  bool typed = false;
  for (;;) {
    if (!next_line(in, line, lineno)) throw ParseError(lineno, "unexpected end of map header");
    auto tok = split_ws(line);
    if (tok.empty()) continue;
    if (tok[0] == "type" && tok.size() == 2) {
      if (tok[1] != "octile") throw ParseError(lineno, "unsupported map type '" + tok[1] + "'");
      typed = true;
    } else if (tok[0] == "height" && tok.size() == 2) {
      height = to_number<int>(tok[1], lineno, "height");
    } else if (tok[0] == "width" && tok.size() == 2) {
      width = to_number<int>(tok[1], lineno, "width");
    } else if (tok[0] == "map" && tok.size() == 1) {
      break;
    } else {
      throw ParseError(lineno, "malformed header line '" + line + "'");
    }
  }
  if (!typed) throw ParseError(lineno, "missing 'type octile'");
  if (height <= 0 || width <= 0) throw ParseError(lineno, "missing or non-positive height/width");

  std::vector<bool> passable;
  passable.reserve(static_cast<std::size_t>(height) * static_cast<std::size_t>(width));
  for (int r = 0; r < height; ++r) {
    if (!next_line(in, line, lineno)) throw ParseError(lineno + 1, "map has fewer than " + std::to_string(height) + " rows");
    if (static_cast<int>(line.size()) != width)
      throw ParseError(lineno, "row length " + std::to_string(line.size()) + " != width " + std::to_string(width));
    for (char ch : line) {
      switch (ch) {
        case '.':
        case 'G':
        case 'S':
          passable.push_back(true);
          break;
        case '@':
        case 'O':
        case 'T':
        case 'W':
          passable.push_back(false);
          break;
        default:
          throw ParseError(lineno, std::string("unknown cell character '") + ch + "'");
      }
    }
  }
  while (next_line(in, line, lineno))
    if (!split_ws(line).empty()) throw ParseError(lineno, "trailing content after map body");
  return Graph::from_grid(height, width, passable);
}

Graph parse_map(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_map(in);
}

Graph load_map(const std::filesystem::path& file) {
  auto in = open_or_throw(file);
  return parse_map(in);
}

std::string render_map(const Graph& grid) {
  if (!grid.is_grid()) throw Error("render_map needs a grid graph");
  std::string out;
  out.reserve(static_cast<std::size_t>(grid.height()) * static_cast<std::size_t>(grid.width() + 1));
  for (int r = 0; r < grid.height(); ++r) {
    for (int c = 0; c < grid.width(); ++c) out.push_back(grid.passable(r, c) ? '.' : '@');
    out.push_back('\n');
  }
  return out;
}

std::vector<ScenEntry> parse_scen(std::istream& in) {
  std::string line;
  int lineno = 0;
  bool versioned = false;
  while (next_line(in, line, lineno)) {
    auto tok = split_ws(line);
    if (tok.empty()) continue;
    if (tok.size() == 2 && tok[0] == "version" && (tok[1] == "1" || tok[1] == "1.0")) {
      versioned = true;
      break;
    }
    throw ParseError(lineno, "expected 'version 1'");
  }
  if (!versioned) throw ParseError(lineno, "missing version line");

  std::vector<ScenEntry> out;
  while (next_line(in, line, lineno)) {
    if (split_ws(line).empty()) continue;
    std::vector<std::string> f;
    std::size_t pos = 0;
    for (;;) {
      auto tab = line.find('\t', pos);
      f.push_back(line.substr(pos, tab == std::string::npos ? std::string::npos : tab - pos));
      if (tab == std::string::npos) break;
      pos = tab + 1;
    }
    if (f.size() != 9) throw ParseError(lineno, "expected 9 tab-separated fields, got " + std::to_string(f.size()));
    ScenEntry e;
    e.bucket = to_number<int>(f[0], lineno, "bucket");
    e.map_name = f[1];
    e.map_width = to_number<int>(f[2], lineno, "width");
    e.map_height = to_number<int>(f[3], lineno, "height");
    e.start_x = to_number<int>(f[4], lineno, "start x");
    e.start_y = to_number<int>(f[5], lineno, "start y");
    e.goal_x = to_number<int>(f[6], lineno, "goal x");
    e.goal_y = to_number<int>(f[7], lineno, "goal y");
    e.optimal_length = to_double(f[8], lineno);
    out.push_back(std::move(e));
  }
  return out;
}

std::vector<ScenEntry> parse_scen(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_scen(in);
}

std::vector<ScenEntry> load_scen(const std::filesystem::path& file) {
  auto in = open_or_throw(file);
  return parse_scen(in);
}

void write_scen(std::ostream& out, const std::vector<ScenEntry>& entries) {
  out << "version 1\n";
  std::ostringstream num;
  for (const auto& e : entries) {
    num.str("");
    num.precision(8);
    num << std::fixed << e.optimal_length;
    out << e.bucket << '\t' << e.map_name << '\t' << e.map_width << '\t' << e.map_height << '\t' << e.start_x << '\t'
        << e.start_y << '\t' << e.goal_x << '\t' << e.goal_y << '\t' << num.str() << '\n';
  }
}

Instance generate_instance(const Graph& grid, const std::vector<ScenEntry>& scen, int agents, int goals_per_agent,
                           std::uint64_t seed) {
  if (!grid.is_grid()) throw Error("instance generation needs a grid map");
  if (agents < 1) throw Error("agent count must be positive");
  if (goals_per_agent < 1) throw Error("goals per agent must be positive");
  if (static_cast<std::size_t>(agents) > scen.size())
    throw Error("scenario has " + std::to_string(scen.size()) + " entries, " + std::to_string(agents) + " agents requested");
  if (agents > grid.vertex_count()) throw Error("more agents than vertices");

  auto vertex_of = [&](int x, int y, std::size_t idx) {
    Vertex v = grid.vertex_at(y, x);
    if (v == kNoVertex)
      throw Error("scenario entry " + std::to_string(idx) + " references blocked cell (" + std::to_string(x) + "," +
                  std::to_string(y) + ")");
    return v;
  };

  std::vector<Vertex> starts;
  for (int i = 0; i < agents; ++i) starts.push_back(vertex_of(scen[i].start_x, scen[i].start_y, i));

  std::vector<Vertex> pool;
  pool.reserve(scen.size());
  for (std::size_t i = 0; i < scen.size(); ++i) pool.push_back(vertex_of(scen[i].goal_x, scen[i].goal_y, i));
  const std::size_t distinct = std::set<Vertex>(pool.begin(), pool.end()).size();
  if (static_cast<std::size_t>(goals_per_agent) > distinct)
    throw Error(std::to_string(goals_per_agent) + " goals per agent requested, scenario has only " +
                std::to_string(distinct) + " distinct goal cells");

  std::mt19937_64 rng(seed);
  std::vector<std::vector<Vertex>> goals(static_cast<std::size_t>(agents));
  for (auto& set : goals) {
    while (static_cast<int>(set.size()) < goals_per_agent) {
      Vertex v = pool[uniform_below(rng, pool.size())];
      if (std::find(set.begin(), set.end(), v) == set.end()) set.push_back(v);
    }
  }

  Instance inst = make_instance(grid, std::move(starts), std::move(goals));
  inst.goals_per_agent = goals_per_agent;
  inst.seed = seed;
  return inst;
}

void write_instance(std::ostream& out, const Instance& instance) {
  const Graph& g = instance.graph;
  out << "mgmapf-instance 1\n";
  out << "agents " << instance.agent_count() << " goals " << instance.goals_per_agent << " seed " << instance.seed
      << "\n";
  if (g.is_grid()) {
    out << "grid " << g.height() << ' ' << g.width() << '\n' << render_map(g);
  } else {
    out << "graph " << g.vertex_count() << ' ' << g.edge_count() << '\n';
    for (Vertex u = 0; u < g.vertex_count(); ++u)
      for (Vertex v : g.neighbors(u))
        if (u < v) out << u << ' ' << v << '\n';
  }
  for (int i = 0; i < instance.agent_count(); ++i) {
    out << instance.starts[i];
    for (Vertex v : instance.goals[i]) out << ' ' << v;
    out << '\n';
  }
}

std::string instance_to_string(const Instance& instance) {
  std::ostringstream os;
  write_instance(os, instance);
  return os.str();
}

Instance read_instance(std::istream& in) {
  std::string line;
  int lineno = 0;
  auto require = [&](const char* what) {
    if (!next_line(in, line, lineno)) throw ParseError(lineno + 1, std::string("missing ") + what);
    return split_ws(line);
  };

  auto tok = require("instance header");
  if (tok.size() != 2 || tok[0] != "mgmapf-instance" || tok[1] != "1")
    throw ParseError(lineno, "expected 'mgmapf-instance 1'");
  tok = require("agents line");
  if (tok.size() != 6 || tok[0] != "agents" || tok[2] != "goals" || tok[4] != "seed")
    throw ParseError(lineno, "expected 'agents <k> goals <m> seed <s>'");
  const int k = to_number<int>(tok[1], lineno, "agent count");
  const int m = to_number<int>(tok[3], lineno, "goal count");
  const auto seed = to_number<std::uint64_t>(tok[5], lineno, "seed");

  Graph graph;
  tok = require("graph section");
  if (tok.size() == 3 && tok[0] == "grid") {
    const int h = to_number<int>(tok[1], lineno, "height");
    const int w = to_number<int>(tok[2], lineno, "width");
    std::ostringstream map;
    map << "type octile\nheight " << h << "\nwidth " << w << "\nmap\n";
    const int body_start = lineno;
    for (int r = 0; r < h; ++r) {
      require("grid row");
      map << line << '\n';
    }
    try {
      graph = parse_map(map.str());
    } catch (const ParseError& e) {
      throw ParseError(body_start + e.line() - 4, e.what());
    }
  } else if (tok.size() == 3 && tok[0] == "graph") {
    const int n = to_number<int>(tok[1], lineno, "vertex count");
    const int e = to_number<int>(tok[2], lineno, "edge count");
    std::vector<std::pair<Vertex, Vertex>> edges;
    for (int i = 0; i < e; ++i) {
      tok = require("edge line");
      if (tok.size() != 2) throw ParseError(lineno, "expected 'u v'");
      edges.emplace_back(to_number<Vertex>(tok[0], lineno, "vertex"), to_number<Vertex>(tok[1], lineno, "vertex"));
    }
    try {
      graph = Graph::from_edges(n, edges);
    } catch (const Error& err) {
      throw ParseError(lineno, err.what());
    }
  } else {
    throw ParseError(lineno, "expected 'grid <h> <w>' or 'graph <n> <e>'");
  }

  std::vector<Vertex> starts;
  std::vector<std::vector<Vertex>> goals;
  for (int i = 0; i < k; ++i) {
    tok = require("agent line");
    if (tok.size() < 2) throw ParseError(lineno, "agent line needs a start and at least one goal");
    starts.push_back(to_number<Vertex>(tok[0], lineno, "start"));
    std::vector<Vertex> g;
    for (std::size_t j = 1; j < tok.size(); ++j) g.push_back(to_number<Vertex>(tok[j], lineno, "goal"));
    goals.push_back(std::move(g));
  }
  Instance inst;
  try {
    inst = make_instance(std::move(graph), std::move(starts), std::move(goals));
  } catch (const InvalidInstance& e) {
    throw ParseError(lineno, e.what());
  }
  inst.goals_per_agent = m;
  inst.seed = seed;
  return inst;
}

Instance read_instance(std::string_view text) {
  std::istringstream in{std::string(text)};
  return read_instance(in);
}

Instance load_instance(const std::filesystem::path& file) {
  auto in = open_or_throw(file);
  return read_instance(in);
}

void write_solution(std::ostream& out, const Solution& solution) {
  for (std::size_t i = 0; i < solution.plans.size(); ++i) {
    out << "agent " << i << ":";
    for (Vertex v : solution.plans[i].path) out << ' ' << v;
    out << " | cost=" << solution.plans[i].completion_time << '\n';
  }
}

std::string solution_to_string(const Solution& solution) {
  std::ostringstream os;
  write_solution(os, solution);
  return os.str();
}

Solution read_solution(std::istream& in) {
  std::string line;
  int lineno = 0;
  Solution s;
  while (next_line(in, line, lineno)) {
    if (line.rfind("agent ", 0) != 0) continue;
    auto colon = line.find(':');
    auto bar = line.find('|');
    if (colon == std::string::npos || bar == std::string::npos || bar < colon)
      throw ParseError(lineno, "expected 'agent <i>: v0 v1 ... | cost=<c>'");
    const int idx = to_number<int>(line.substr(6, colon - 6), lineno, "agent index");
    if (idx != static_cast<int>(s.plans.size())) throw ParseError(lineno, "agent lines out of order");
    Plan p;
    std::istringstream body(line.substr(colon + 1, bar - colon - 1));
    for (std::string tok; body >> tok;) p.path.push_back(to_number<Vertex>(tok, lineno, "vertex"));
    if (p.path.empty()) throw ParseError(lineno, "empty path");
    auto cost = split_ws(line.substr(bar + 1));
    if (cost.size() != 1 || cost[0].rfind("cost=", 0) != 0) throw ParseError(lineno, "expected 'cost=<c>'");
    p.completion_time = to_number<Timestep>(cost[0].substr(5), lineno, "cost");
    s.plans.push_back(std::move(p));
  }
  s.soc = sum_of_costs(s);
  s.makespan = makespan(s);
  return s;
}

Solution load_solution(const std::filesystem::path& file) {
  auto in = open_or_throw(file);
  return read_solution(in);
}

}  // namespace mgmapf
