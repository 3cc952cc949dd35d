#include "grnn/classify.hpp"

#include "grnn/errors.hpp"
#include "grnn/text_format.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <map>
#include <thread>

namespace grnn {

std::vector<double> Axis::values() const
{
  std::vector<double> v(samples);
  const double last = static_cast<double>(samples - 1);
  for (std::size_t i = 0; i < samples; ++i) {
    const double f = static_cast<double>(i) / last;
    v[i] = lo + (hi - lo) * f;
  }
  if (!v.empty()) {
    v.front() = lo;
    v.back() = hi;
  }
  return v;
}

std::size_t ClassificationGrid::gene_slot(const std::string& id) const
{
  auto it = std::find(genes.begin(), genes.end(), id);
  if (it == genes.end()) {
    throw InvalidArgument("grid has no gene '" + id + "'");
  }
  return static_cast<std::size_t>(it - genes.begin());
}

bool ClassificationGrid::above(std::size_t gene, std::size_t ix, std::size_t iy) const
{
  const double v = value(gene, ix, iy);
  return v >= threshold && v > 0.0;
}

std::vector<std::uint8_t> ClassificationGrid::mask(std::size_t gene) const
{
  std::vector<std::uint8_t> m(nx() * ny());
  for (std::size_t iy = 0; iy < ny(); ++iy) {
    for (std::size_t ix = 0; ix < nx(); ++ix) {
      m[iy * nx() + ix] = above(gene, ix, iy) ? 1 : 0;
    }
  }
  return m;
}

std::size_t sweep_threads()
{
  std::size_t n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("GRNN_LAB_THREADS")) {
    char* end = nullptr;
    const long cap = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && cap > 0) {
      n = std::min(n, static_cast<std::size_t>(cap));
    }
  }
  return n;
}

namespace {

void require_valid_axis(const Axis& a, const char* name)
{
  if (!std::isfinite(a.lo) || !std::isfinite(a.hi) || !(a.lo < a.hi)) {
    throw InvalidArgument(std::string(name) + " axis range must be finite with lo < hi");
  }
  if (a.lo < 0.0) {
    throw InvalidArgument(std::string(name) + " axis must not go below zero");
  }
  if (a.samples < 2) {
    throw InvalidArgument(std::string(name) + " axis needs at least two samples");
  }
}

} // namespace

ClassificationGrid sweep(const Grnn& net, const SweepConfig& cfg)
{
  require_valid(net);
  require_valid_axis(cfg.x, "x");
  require_valid_axis(cfg.y, "y");
  if (cfg.x.input == cfg.y.input) {
    throw InvalidArgument("x and y axes must use different inputs");
  }
  if (!std::isfinite(cfg.threshold)) {
    throw InvalidArgument("threshold must be finite");
  }
  const NetworkPlan plan(net);
  const std::size_t x_slot = plan.input_index(cfg.x.input);
  const std::size_t y_slot = plan.input_index(cfg.y.input);

  InputAssignment base = cfg.fixed;
  base[cfg.x.input] = 0.0;
  base[cfg.y.input] = 0.0;
  const std::vector<double> base_values = plan.input_vector(base);

  ClassificationGrid grid;
  grid.x = cfg.x;
  grid.y = cfg.y;
  grid.xs = cfg.x.values();
  grid.ys = cfg.y.values();
  grid.threshold = cfg.threshold;
  grid.scale = cfg.scale;
  const std::size_t n_genes = plan.gene_count();
  for (std::size_t i = 0; i < n_genes; ++i) {
    grid.genes.push_back(plan.gene(i).id);
  }
  const std::size_t nx = grid.nx();
  const std::size_t ny = grid.ny();
  grid.values.assign(n_genes, std::vector<double>(nx * ny, 0.0));

  // Rows are handed out dynamically; every cell is written by exactly one
  // worker, so the result does not depend on scheduling.
  std::atomic<std::size_t> next_row{0};
  const auto work = [&] {
    std::vector<double> input_values = base_values;
    for (std::size_t iy = next_row++; iy < ny; iy = next_row++) {
      input_values[y_slot] = grid.ys[iy];
      for (std::size_t ix = 0; ix < nx; ++ix) {
        input_values[x_slot] = grid.xs[ix];
        const auto steady = plan.steady_states(input_values);
        for (std::size_t g = 0; g < n_genes; ++g) {
          grid.values[g][iy * nx + ix] = cfg.scale == OutputScale::normalized
                                             ? steady[g].normalized
                                             : steady[g].protein;
        }
      }
    }
  };
  const std::size_t n_threads =
      std::min(ny, cfg.threads > 0 ? cfg.threads : sweep_threads());
  if (n_threads <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < n_threads; ++t) {
      pool.emplace_back(work);
    }
  }
  return grid;
}

namespace {

// Crossing points live on cell edges. Edge keys: 2*(iy*nx+ix) for the
// horizontal edge to the right of node (ix, iy), +1 for the vertical edge
// above it.
class Contour
{
public:
  Contour(const ClassificationGrid& grid, std::size_t gene) : grid_(grid), gene_(gene) {}

  std::vector<Polyline> trace()
  {
    const std::size_t nx = grid_.nx();
    const std::size_t ny = grid_.ny();
    for (std::size_t iy = 0; iy + 1 < ny; ++iy) {
      for (std::size_t ix = 0; ix + 1 < nx; ++ix) {
        cell(ix, iy);
      }
    }
    return chain();
  }

private:
  std::size_t node(std::size_t ix, std::size_t iy) const { return iy * grid_.nx() + ix; }
  std::size_t h_edge(std::size_t ix, std::size_t iy) const { return 2 * node(ix, iy); }
  std::size_t v_edge(std::size_t ix, std::size_t iy) const { return 2 * node(ix, iy) + 1; }

  bool inside(double v) const { return v >= grid_.threshold && v > 0.0; }

  void cell(std::size_t ix, std::size_t iy)
  {
    const double v0 = grid_.value(gene_, ix, iy);
    const double v1 = grid_.value(gene_, ix + 1, iy);
    const double v2 = grid_.value(gene_, ix + 1, iy + 1);
    const double v3 = grid_.value(gene_, ix, iy + 1);
    const int code = (inside(v0) ? 1 : 0) | (inside(v1) ? 2 : 0) | (inside(v2) ? 4 : 0) |
                     (inside(v3) ? 8 : 0);
    const std::size_t bottom = h_edge(ix, iy);
    const std::size_t right = v_edge(ix + 1, iy);
    const std::size_t top = h_edge(ix, iy + 1);
    const std::size_t left = v_edge(ix, iy);
    const bool center = inside(0.25 * (v0 + v1 + v2 + v3));

    switch (code) {
    case 1: case 14: segment(left, bottom); break;
    case 2: case 13: segment(bottom, right); break;
    case 3: case 12: segment(left, right); break;
    case 4: case 11: segment(right, top); break;
    case 6: case 9: segment(bottom, top); break;
    case 7: case 8: segment(left, top); break;
    case 5:
      if (center) {
        segment(bottom, right);
        segment(top, left);
      } else {
        segment(left, bottom);
        segment(right, top);
      }
      break;
    case 10:
      if (center) {
        segment(left, bottom);
        segment(right, top);
      } else {
        segment(bottom, right);
        segment(top, left);
      }
      break;
    default:
      break;
    }
  }

  void segment(std::size_t a, std::size_t b)
  {
    const std::size_t id = segments_.size();
    segments_.push_back({a, b});
    adjacency_[a].push_back(id);
    adjacency_[b].push_back(id);
  }

  Point crossing(std::size_t key) const
  {
    const std::size_t n = key / 2;
    const std::size_t ix = n % grid_.nx();
    const std::size_t iy = n / grid_.nx();
    const bool vertical = key % 2 == 1;
    const std::size_t jx = vertical ? ix : ix + 1;
    const std::size_t jy = vertical ? iy + 1 : iy;
    const double va = grid_.value(gene_, ix, iy);
    const double vb = grid_.value(gene_, jx, jy);
    double f = 0.5;
    if (vb != va) {
      f = std::clamp((grid_.threshold - va) / (vb - va), 0.0, 1.0);
    }
    if (vertical) {
      return {grid_.xs[ix], grid_.ys[iy] + f * (grid_.ys[jy] - grid_.ys[iy])};
    }
    return {grid_.xs[ix] + f * (grid_.xs[jx] - grid_.xs[ix]), grid_.ys[iy]};
  }

  Polyline walk(std::size_t start_key, std::size_t start_seg)
  {
    Polyline line{crossing(start_key)};
    std::size_t key = start_key;
    std::size_t seg = start_seg;
    while (true) {
      used_[seg] = true;
      const auto [a, b] = segments_[seg];
      key = key == a ? b : a;
      line.push_back(crossing(key));
      std::optional<std::size_t> next;
      for (std::size_t s : adjacency_[key]) {
        if (!used_[s]) {
          next = s;
          break;
        }
      }
      if (!next) {
        break;
      }
      seg = *next;
    }
    return line;
  }

  std::vector<Polyline> chain()
  {
    used_.assign(segments_.size(), false);
    std::vector<Polyline> lines;
    // Open chains first, starting at their free ends on the grid border.
    for (std::size_t s = 0; s < segments_.size(); ++s) {
      for (std::size_t key : {segments_[s].first, segments_[s].second}) {
        if (!used_[s] && adjacency_[key].size() == 1) {
          lines.push_back(walk(key, s));
        }
      }
    }
    for (std::size_t s = 0; s < segments_.size(); ++s) {
      if (!used_[s]) {
        lines.push_back(walk(segments_[s].first, s));
      }
    }
    return lines;
  }

  const ClassificationGrid& grid_;
  std::size_t gene_;
  std::vector<std::pair<std::size_t, std::size_t>> segments_;
  std::map<std::size_t, std::vector<std::size_t>> adjacency_;
  std::vector<bool> used_;
};

} // namespace

RegionMetrics extract_boundary(const ClassificationGrid& grid, const std::string& gene)
{
  const std::size_t g = grid.gene_slot(gene);
  RegionMetrics m;
  m.gene = gene;
  m.x = grid.x;
  m.y = grid.y;
  m.threshold = grid.threshold;

  std::size_t count = 0;
  for (std::size_t iy = 0; iy < grid.ny(); ++iy) {
    for (std::size_t ix = 0; ix < grid.nx(); ++ix) {
      if (!grid.above(g, ix, iy)) {
        continue;
      }
      ++count;
      const double x = grid.xs[ix];
      const double y = grid.ys[iy];
      if (!m.x_extent) {
        m.x_extent = {x, x};
        m.y_extent = {y, y};
      } else {
        m.x_extent->first = std::min(m.x_extent->first, x);
        m.x_extent->second = std::max(m.x_extent->second, x);
        m.y_extent->first = std::min(m.y_extent->first, y);
        m.y_extent->second = std::max(m.y_extent->second, y);
      }
    }
  }
  const std::size_t total = grid.nx() * grid.ny();
  m.area_fraction = total == 0 ? 0.0 : static_cast<double>(count) / static_cast<double>(total);
  if (grid.nx() >= 2 && grid.ny() >= 2) {
    m.boundary = Contour(grid, g).trace();
  }
  return m;
}

RegionShift compare_regions(const RegionMetrics& a, const RegionMetrics& b)
{
  if (!(a.x == b.x) || !(a.y == b.y)) {
    throw InvalidArgument("regions were computed on different axes");
  }
  RegionShift shift;
  shift.area_fraction = b.area_fraction - a.area_fraction;
  if (a.x_extent && b.x_extent) {
    shift.x_min = b.x_extent->first - a.x_extent->first;
    shift.x_max = b.x_extent->second - a.x_extent->second;
    shift.y_min = b.y_extent->first - a.y_extent->first;
    shift.y_max = b.y_extent->second - a.y_extent->second;
  }
  return shift;
}

std::string to_string(OutputScale scale)
{
  return scale == OutputScale::normalized ? "normalized" : "raw";
}

void write_grid_csv(std::ostream& out, const ClassificationGrid& grid)
{
  out << "x,y";
  for (const auto& g : grid.genes) {
    out << ',' << g;
  }
  out << '\n';
  for (std::size_t iy = 0; iy < grid.ny(); ++iy) {
    for (std::size_t ix = 0; ix < grid.nx(); ++ix) {
      out << format_double(grid.xs[ix]) << ',' << format_double(grid.ys[iy]);
      for (std::size_t g = 0; g < grid.genes.size(); ++g) {
        out << ',' << format_double(grid.value(g, ix, iy));
      }
      out << '\n';
    }
  }
}

void write_mask_pgm(std::ostream& out, const ClassificationGrid& grid, const std::string& gene)
{
  const std::size_t g = grid.gene_slot(gene);
  out << "P2\n" << grid.nx() << ' ' << grid.ny() << "\n1\n";
  for (std::size_t row = 0; row < grid.ny(); ++row) {
    const std::size_t iy = grid.ny() - 1 - row;
    for (std::size_t ix = 0; ix < grid.nx(); ++ix) {
      out << (ix ? " " : "") << (grid.above(g, ix, iy) ? 1 : 0);
    }
    out << '\n';
  }
}

void write_metrics_json(std::ostream& out, const RegionMetrics& m)
{
  nlohmann::ordered_json doc;
  doc["gene"] = m.gene;
  doc["threshold"] = m.threshold;
  doc["area_fraction"] = m.area_fraction;
  const auto extent = [](const std::optional<std::pair<double, double>>& e) {
    return e ? nlohmann::ordered_json::array({e->first, e->second}) : nlohmann::ordered_json();
  };
  doc["x_extent"] = extent(m.x_extent);
  doc["y_extent"] = extent(m.y_extent);
  auto boundary = nlohmann::ordered_json::array();
  for (const auto& line : m.boundary) {
    auto pts = nlohmann::ordered_json::array();
    for (const auto& p : line) {
      pts.push_back({p.x, p.y});
    }
    boundary.push_back(std::move(pts));
  }
  doc["boundary"] = std::move(boundary);
  out << doc.dump(2) << '\n';
}

} // namespace grnn
