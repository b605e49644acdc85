#include "sdetect/diagnostics.hpp"

#include "sdetect/error.hpp"
#include "sdetect/io.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

namespace sdetect {

namespace {

constexpr std::size_t none = std::numeric_limits<std::size_t>::max();

class Grid
{
public:
  Grid(const DetectionModel& model, const RectDomain& domain, int res)
    : model_(model)
    , domain_(domain)
    , n_(static_cast<std::size_t>(res))
    , values_((n_ + 1) * (n_ + 1))
  {
    for (std::size_t j = 0; j <= n_; ++j)
      for (std::size_t i = 0; i <= n_; ++i)
        values_[j * (n_ + 1) + i] = model_(node(i, j));
  }

  Point2 node(std::size_t i, std::size_t j) const
  {
    return { coord(domain_.xmin(), domain_.xmax(), i), coord(domain_.ymin(), domain_.ymax(), j) };
  }
  double value(std::size_t i, std::size_t j) const { return values_[j * (n_ + 1) + i]; }
  bool positive(std::size_t i, std::size_t j) const { return value(i, j) >= 0.0; }

  double max_abs() const
  {
    double m = 0.0;
    for (double v : values_)
      m = std::max(m, std::abs(v));
    return m;
  }
  bool has_sign_change() const
  {
    const bool first = values_.front() >= 0.0;
    return std::any_of(values_.begin(), values_.end(),
                       [&](double v) { return (v >= 0.0) != first; });
  }

  std::size_t cells() const { return n_; }
  std::size_t horizontal_edges() const { return n_ * (n_ + 1); }
  std::size_t edge_count() const { return 2 * n_ * (n_ + 1); }
  // Edge (i,j)-(i+1,j).
  std::size_t h_edge(std::size_t i, std::size_t j) const { return j * n_ + i; }
  // Edge (i,j)-(i,j+1).
  std::size_t v_edge(std::size_t i, std::size_t j) const
  {
    return horizontal_edges() + j * (n_ + 1) + i;
  }

  std::pair<std::pair<std::size_t, std::size_t>, std::pair<std::size_t, std::size_t>>
  edge_nodes(std::size_t id) const
  {
    if (id < horizontal_edges()) {
      const std::size_t j = id / n_, i = id % n_;
      return { { i, j }, { i + 1, j } };
    }
    id -= horizontal_edges();
    const std::size_t j = id / (n_ + 1), i = id % (n_ + 1);
    return { { i, j }, { i, j + 1 } };
  }

  const DetectionModel& model() const { return model_; }
  const RectDomain& domain() const { return domain_; }

private:
  double coord(double lo, double hi, std::size_t k) const
  {
    if (k == n_)
      return hi;
    return lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(n_);
  }

  const DetectionModel& model_;
  RectDomain domain_;
  std::size_t n_;
  std::vector<double> values_;
};

Point2 refine_root(const DetectionModel& f, Point2 pos, Point2 neg, double tol)
{
  Point2 best = pos;
  double best_abs = std::abs(f(pos));
  for (int it = 0; it < 60 && best_abs > tol; ++it) {
    const Point2 mid{ 0.5 * (pos.x + neg.x), 0.5 * (pos.y + neg.y) };
    const double v = f(mid);
    if (std::abs(v) < best_abs) {
      best = mid;
      best_abs = std::abs(v);
    }
    if (v >= 0.0)
      pos = mid;
    else
      neg = mid;
  }
  return best;
}

double segment_length(const std::vector<Point2>& s)
{
  double len = 0.0;
  for (std::size_t i = 1; i < s.size(); ++i)
    len += std::sqrt(squared_distance(s[i - 1], s[i]));
  return len;
}

std::string fmt3(double v)
{
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

std::string xml_escape(const std::string& s)
{
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out += c;
    }
  }
  return out;
}

} // namespace

std::size_t TracedCurve::vertex_count() const
{
  std::size_t n = 0;
  for (const auto& s : segments)
    n += s.size();
  return n;
}

double TracedCurve::length() const
{
  double len = 0.0;
  for (const auto& s : segments)
    len += segment_length(s);
  return len;
}

double RadiusSamples::mean() const
{
  if (values.empty())
    return 0.0;
  double sum = 0.0;
  for (double v : values)
    sum += v;
  return sum / static_cast<double>(values.size());
}

TracedCurve trace_zero_set(const DetectionModel& model, const RectDomain& domain,
                           int resolution)
{
  if (resolution < 2)
    throw ArgumentError("trace resolution must be at least 2, got " +
                        std::to_string(resolution));

  const Grid grid(model, domain, resolution);
  TracedCurve curve;
  curve.grid_resolution = resolution;
  curve.domain = domain;
  curve.tolerance = 1e-6 * grid.max_abs();
  if (!grid.has_sign_change())
    return curve;

  const std::size_t n = grid.cells();
  std::vector<Point2> vertex(grid.edge_count());
  std::vector<char> has_vertex(grid.edge_count(), 0);
  auto edge_vertex = [&](std::size_t id) {
    if (!has_vertex[id]) {
      const auto [a, b] = grid.edge_nodes(id);
      Point2 pa = grid.node(a.first, a.second), pb = grid.node(b.first, b.second);
      if (!grid.positive(a.first, a.second))
        std::swap(pa, pb);
      vertex[id] = refine_root(model, pa, pb, curve.tolerance);
      has_vertex[id] = 1;
    }
  };

  // Two links per edge at most: one from each neighbouring cell.
  std::vector<std::array<std::size_t, 2>> links(grid.edge_count(), { none, none });
  auto link = [&](std::size_t a, std::size_t b) {
    edge_vertex(a);
    edge_vertex(b);
    (links[a][0] == none ? links[a][0] : links[a][1]) = b;
    (links[b][0] == none ? links[b][0] : links[b][1]) = a;
  };

  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      const bool bl = grid.positive(i, j), br = grid.positive(i + 1, j);
      const bool tr = grid.positive(i + 1, j + 1), tl = grid.positive(i, j + 1);
      const std::size_t bottom = grid.h_edge(i, j), top = grid.h_edge(i, j + 1);
      const std::size_t left = grid.v_edge(i, j), right = grid.v_edge(i + 1, j);

      std::vector<std::size_t> crossing;
      if (bl != br) crossing.push_back(bottom);
      if (br != tr) crossing.push_back(right);
      if (tr != tl) crossing.push_back(top);
      if (tl != bl) crossing.push_back(left);

      if (crossing.size() == 2) {
        link(crossing[0], crossing[1]);
      } else if (crossing.size() == 4) {
        const Point2 a = grid.node(i, j), c = grid.node(i + 1, j + 1);
        const bool centre = model({ 0.5 * (a.x + c.x), 0.5 * (a.y + c.y) }) >= 0.0;
        if (centre == bl) {
          link(bottom, right);
          link(top, left);
        } else {
          link(left, bottom);
          link(right, top);
        }
      }
    }
  }

  std::vector<char> visited(grid.edge_count(), 0);
  auto walk = [&](std::size_t start) {
    std::vector<Point2> poly{ vertex[start] };
    visited[start] = 1;
    std::size_t prev = none, cur = start;
    while (true) {
      std::size_t next = none;
      for (std::size_t cand : links[cur])
        if (cand != none && cand != prev && !visited[cand]) {
          next = cand;
          break;
        }
      if (next == none) {
        // Closed loop: cur links back to start.
        if (cur != start && (links[cur][0] == start || links[cur][1] == start) &&
            prev != start)
          poly.push_back(vertex[start]);
        break;
      }
      poly.push_back(vertex[next]);
      visited[next] = 1;
      prev = cur;
      cur = next;
    }
    curve.segments.push_back(std::move(poly));
  };

  // Open chains start at edges with a single link, then the remaining loops.
  for (std::size_t id = 0; id < grid.edge_count(); ++id)
    if (!visited[id] && links[id][0] != none && links[id][1] == none)
      walk(id);
  for (std::size_t id = 0; id < grid.edge_count(); ++id)
    if (!visited[id] && links[id][0] != none)
      walk(id);
  return curve;
}

RadiusSamples radius_function(const TracedCurve& curve, std::size_t n_samples)
{
  if (curve.empty())
    throw Error("radius function needs a nonempty curve");
  if (n_samples == 0)
    throw ArgumentError("radius function needs at least one sample");

  RadiusSamples out;
  out.points.reserve(n_samples);
  const double total = curve.length();
  std::size_t seg = 0, idx = 0;
  double walked = 0.0; // arc length up to segments[seg][idx]
  for (std::size_t k = 0; k < n_samples; ++k) {
    const double target =
      total * (static_cast<double>(k) + 0.5) / static_cast<double>(n_samples);
    Point2 p = curve.segments.front().front();
    while (seg < curve.segments.size()) {
      const auto& s = curve.segments[seg];
      if (idx + 1 >= s.size()) {
        ++seg;
        idx = 0;
        continue;
      }
      const double piece = std::sqrt(squared_distance(s[idx], s[idx + 1]));
      if (walked + piece >= target) {
        const double t = piece > 0.0 ? (target - walked) / piece : 0.0;
        p = { s[idx].x + t * (s[idx + 1].x - s[idx].x),
              s[idx].y + t * (s[idx + 1].y - s[idx].y) };
        break;
      }
      walked += piece;
      ++idx;
    }
    if (seg >= curve.segments.size())
      p = curve.segments.back().back();
    out.points.push_back(p);
    out.values.push_back(std::hypot(p.x, p.y));
  }
  return out;
}

void write_curve_csv(std::ostream& out, const TracedCurve& curve)
{
  out << "segment_id,x,y\n";
  for (std::size_t s = 0; s < curve.segments.size(); ++s)
    for (const auto& p : curve.segments[s])
      out << s << ',' << format_double(p.x) << ',' << format_double(p.y) << '\n';
}

void write_curve_svg(std::ostream& out, const TracedCurve& curve, const SvgLayers& layers)
{
  const RectDomain& d = curve.domain;
  const double size = 512.0, margin = 16.0;
  const double scale = size / std::max(d.width(), d.height());
  const double w = d.width() * scale + 2 * margin, h = d.height() * scale + 2 * margin;
  auto px = [&](Point2 p) {
    return fmt3(margin + (p.x - d.xmin()) * scale) + "," +
           fmt3(margin + (d.ymax() - p.y) * scale);
  };

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt3(w) << "\" height=\""
      << fmt3(h) << "\" viewBox=\"0 0 " << fmt3(w) << ' ' << fmt3(h) << "\">\n";
  if (!layers.metadata.empty())
    out << "<metadata>" << xml_escape(layers.metadata) << "</metadata>\n";
  out << "<rect id=\"domain\" x=\"" << fmt3(margin) << "\" y=\"" << fmt3(margin)
      << "\" width=\"" << fmt3(d.width() * scale) << "\" height=\""
      << fmt3(d.height() * scale) << "\" fill=\"white\" stroke=\"black\"/>\n";

  auto dots = [&](const char* id, const PointSet& pts, const char* colour, double r) {
    out << "<g id=\"" << id << "\" fill=\"" << colour << "\">\n";
    for (const auto& p : pts) {
      const std::string xy = px(p);
      const auto comma = xy.find(',');
      out << "<circle cx=\"" << xy.substr(0, comma) << "\" cy=\"" << xy.substr(comma + 1)
          << "\" r=\"" << fmt3(r) << "\"/>\n";
    }
    out << "</g>\n";
  };
  if (layers.input)
    dots("input", *layers.input, "#999999", 1.5);
  if (layers.filtered)
    dots("filtered", *layers.filtered, "#1f77b4", 2.0);

  out << "<g id=\"curve\" fill=\"none\" stroke=\"#d62728\" stroke-width=\"2\">\n";
  for (const auto& s : curve.segments) {
    out << "<polyline points=\"";
    for (std::size_t i = 0; i < s.size(); ++i)
      out << (i ? " " : "") << px(s[i]);
    out << "\"/>\n";
  }
  out << "</g>\n</svg>\n";
}

} // namespace sdetect
