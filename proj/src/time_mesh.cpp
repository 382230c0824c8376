#include "fracwave/time_mesh.hpp"

#include <cmath>
#include <stdexcept>

namespace fracwave {

TimeMesh::TimeMesh(std::vector<double> nodes, double grading)
    : nodes_(std::move(nodes)), grading_(grading) {
  if (nodes_.size() < 2) throw std::invalid_argument("mesh needs at least two nodes");
  if (nodes_.front() != 0.0) throw std::invalid_argument("mesh must start at t = 0");
  for (std::size_t i = 1; i < nodes_.size(); ++i)
    if (!(nodes_[i] > nodes_[i - 1]))
      throw std::invalid_argument("mesh nodes must be strictly increasing");
  if (grading_ == 1.0) {
    uniform_ = true;
    const double h = nodes_[1] - nodes_[0];
    for (std::size_t i = 1; i < nodes_.size(); ++i)
      if (std::abs((nodes_[i] - nodes_[i - 1]) - h) > 1e-12 * h) {
        uniform_ = false;
        break;
      }
  }
}

MeshPtr TimeMesh::uniform(double horizon, int steps) {
  if (!(horizon > 0.0) || steps < 1) throw std::invalid_argument("bad mesh parameters");
  std::vector<double> nodes(steps + 1);
  for (int j = 0; j <= steps; ++j) nodes[j] = horizon * j / steps;
  nodes[0] = 0.0;
  nodes[steps] = horizon;
  return MeshPtr(new TimeMesh(std::move(nodes), 1.0));
}

MeshPtr TimeMesh::graded(double horizon, int steps, double r) {
  if (!(horizon > 0.0) || steps < 1 || !(r >= 1.0))
    throw std::invalid_argument("bad mesh parameters");
  if (r == 1.0) return uniform(horizon, steps);
  std::vector<double> nodes(steps + 1);
  for (int j = 0; j <= steps; ++j)
    nodes[j] = horizon * std::pow(double(j) / steps, r);
  nodes[0] = 0.0;
  nodes[steps] = horizon;
  return MeshPtr(new TimeMesh(std::move(nodes), r));
}

MeshPtr TimeMesh::from_nodes(std::vector<double> nodes) {
  return MeshPtr(new TimeMesh(std::move(nodes), 0.0));
}

SampledPath::SampledPath(MeshPtr m, std::vector<double> v)
    : mesh(std::move(m)), values(std::move(v)) {
  if (!mesh || values.size() != mesh->size())
    throw std::invalid_argument("path length must match the mesh");
}

SampledPath sample(const MeshPtr& mesh, const std::function<double(double)>& f) {
  std::vector<double> v(mesh->size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = f(mesh->node(i));
  return {mesh, std::move(v)};
}

}  // namespace fracwave
