#include "supg/fe_space.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <tuple>

namespace supg {

DofMapP2 DofMapP2::build(const Mesh& mesh) {
  DofMapP2 map;
  const std::size_t nv = mesh.n_vertices();
  const std::size_t nc = mesh.n_cells();

  struct EdgeRef {
    std::size_t lo, hi, cell;
    int local;
  };
  std::vector<EdgeRef> refs;
  refs.reserve(3 * nc);
  for (std::size_t k = 0; k < nc; ++k) {
    const auto& c = mesh.cell(k);
    for (int e = 0; e < 3; ++e) {
      const std::size_t a = c[static_cast<std::size_t>(kP2LocalEdges[e][0])];
      const std::size_t b = c[static_cast<std::size_t>(kP2LocalEdges[e][1])];
      refs.push_back({std::min(a, b), std::max(a, b), k, e});
    }
  }
  std::sort(refs.begin(), refs.end(), [](const EdgeRef& l, const EdgeRef& r) {
    return std::tie(l.lo, l.hi, l.cell) < std::tie(r.lo, r.hi, r.cell);
  });

  map.cell_dofs_.resize(nc);
  for (std::size_t k = 0; k < nc; ++k) {
    const auto& c = mesh.cell(k);
    map.cell_dofs_[k][0] = c[0];
    map.cell_dofs_[k][1] = c[1];
    map.cell_dofs_[k][2] = c[2];
  }
  map.coords_.assign(mesh.vertices().begin(), mesh.vertices().end());

  std::size_t next = nv;
  for (std::size_t r = 0; r < refs.size(); ++r) {
    const bool fresh = r == 0 || refs[r].lo != refs[r - 1].lo || refs[r].hi != refs[r - 1].hi;
    if (fresh) {
      map.coords_.push_back(0.5 * (mesh.vertex(refs[r].lo) + mesh.vertex(refs[r].hi)));
      ++next;
    }
    map.cell_dofs_[refs[r].cell][static_cast<std::size_t>(3 + refs[r].local)] = next - 1;
  }

  map.boundary_.resize(map.coords_.size());
  for (std::size_t i = 0; i < map.coords_.size(); ++i) {
    map.boundary_[i] = on_unit_square_boundary(map.coords_[i]) ? 1 : 0;
  }
  return map;
}

std::size_t DofMapP2::n_boundary_dofs() const {
  return static_cast<std::size_t>(std::count(boundary_.begin(), boundary_.end(), 1));
}

Barycentric CellGeometry::barycentric(Vec2 p) const {
  const Vec2 d = p - vertices[0];
  const double l1 = dot(grad_lambda[1], d);
  const double l2 = dot(grad_lambda[2], d);
  return {1.0 - l1 - l2, l1, l2};
}

namespace {

CellGeometry make_geometry(const Mesh& mesh, std::size_t k) {
  CellGeometry g;
  const auto& c = mesh.cell(k);
  for (std::size_t i = 0; i < 3; ++i) g.vertices[i] = mesh.vertex(c[i]);
  const Vec2 p0 = g.vertices[0], p1 = g.vertices[1], p2 = g.vertices[2];
  const double twice_area = cross(p1 - p0, p2 - p0);
  g.area = 0.5 * twice_area;
  g.diameter = mesh.cell_diameter(k);
  g.grad_lambda[0] = (1.0 / twice_area) * Vec2{p1.y - p2.y, p2.x - p1.x};
  g.grad_lambda[1] = (1.0 / twice_area) * Vec2{p2.y - p0.y, p0.x - p2.x};
  g.grad_lambda[2] = (1.0 / twice_area) * Vec2{p0.y - p1.y, p1.x - p0.x};
  return g;
}

SparsityPattern make_pattern(const DofMapP2& dofs) {
  const std::size_t n = dofs.n_dofs();
  std::vector<std::vector<int>> rows(n);
  for (std::size_t k = 0; k < dofs.n_cells(); ++k) {
    const auto& cd = dofs.cell_dofs(k);
    for (std::size_t a : cd) {
      for (std::size_t b : cd) rows[a].push_back(static_cast<int>(b));
    }
  }
  SparsityPattern p;
  p.row_offsets.resize(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) {
    auto& r = rows[i];
    std::sort(r.begin(), r.end());
    r.erase(std::unique(r.begin(), r.end()), r.end());
    p.row_offsets[i + 1] = p.row_offsets[i] + static_cast<int>(r.size());
  }
  p.columns.reserve(static_cast<std::size_t>(p.row_offsets[n]));
  for (const auto& r : rows) p.columns.insert(p.columns.end(), r.begin(), r.end());

  auto find_slot = [&p](std::size_t row, std::size_t col) {
    const auto first = p.columns.begin() + p.row_offsets[row];
    const auto last = p.columns.begin() + p.row_offsets[row + 1];
    const auto it = std::lower_bound(first, last, static_cast<int>(col));
    return static_cast<std::size_t>(it - p.columns.begin());
  };

  constexpr std::size_t kBlock = kP2LocalDofs * kP2LocalDofs;
  p.cell_slots.resize(dofs.n_cells() * kBlock);
  for (std::size_t k = 0; k < dofs.n_cells(); ++k) {
    const auto& cd = dofs.cell_dofs(k);
    for (std::size_t a = 0; a < kP2LocalDofs; ++a) {
      for (std::size_t b = 0; b < kP2LocalDofs; ++b) {
        p.cell_slots[k * kBlock + a * kP2LocalDofs + b] = find_slot(cd[a], cd[b]);
      }
    }
  }
  p.diagonal.resize(n);
  for (std::size_t i = 0; i < n; ++i) p.diagonal[i] = find_slot(i, i);
  return p;
}

}  // namespace

FeSpace::FeSpace(Mesh mesh)
    : mesh_(std::move(mesh)), dofs_(DofMapP2::build(mesh_)), pattern_(make_pattern(dofs_)) {
  geometry_.reserve(mesh_.n_cells());
  for (std::size_t k = 0; k < mesh_.n_cells(); ++k) geometry_.push_back(make_geometry(mesh_, k));
}

SpacePtr make_space(int cells_per_side) {
  return std::make_shared<const FeSpace>(Mesh::uniform(cells_per_side));
}

FeFunction::FeFunction(SpacePtr s) : space(std::move(s)), coefficients(space->n_dofs(), 0.0) {}

FeFunction::FeFunction(SpacePtr s, std::vector<double> c)
    : space(std::move(s)), coefficients(std::move(c)) {
  if (coefficients.size() != space->n_dofs()) {
    throw std::invalid_argument("FeFunction: coefficient count does not match the DoF map");
  }
}

P2Values FeFunction::local(std::size_t cell) const {
  const auto& cd = space->dofs().cell_dofs(cell);
  P2Values out;
  for (std::size_t a = 0; a < kP2LocalDofs; ++a) out[a] = coefficients[cd[a]];
  return out;
}

namespace {
Barycentric clamp_to_simplex(Barycentric l) {
  for (double& c : l) c = std::clamp(c, 0.0, 1.0);
  const double s = l[0] + l[1] + l[2];
  for (double& c : l) c /= s;
  return l;
}
}  // namespace

double evaluate_fe(const FeFunction& u, Vec2 point) {
  const std::size_t k = u.space->mesh().locate(point);
  const auto l = clamp_to_simplex(u.space->geometry(k).barycentric(point));
  const auto phi = p2_values(l);
  const auto c = u.local(k);
  double v = 0.0;
  for (std::size_t a = 0; a < kP2LocalDofs; ++a) v += c[a] * phi[a];
  return v;
}

Vec2 evaluate_fe_gradient(const FeFunction& u, Vec2 point) {
  const std::size_t k = u.space->mesh().locate(point);
  const auto& geo = u.space->geometry(k);
  const auto l = clamp_to_simplex(geo.barycentric(point));
  const auto dphi = p2_gradients(l, geo.grad_lambda);
  const auto c = u.local(k);
  Vec2 g;
  for (std::size_t a = 0; a < kP2LocalDofs; ++a) g += c[a] * dphi[a];
  return g;
}

}  // namespace supg
