#ifndef FRACWAVE_TIME_MESH_HPP
#define FRACWAVE_TIME_MESH_HPP

#include <functional>
#include <memory>
#include <vector>

namespace fracwave {

// Discrete time grid t_0 = 0 < ... < t_N = T. Graded meshes place
// t_j = T (j/N)^r; r = 1 reproduces the uniform mesh exactly.
class TimeMesh {
 public:
  static std::shared_ptr<const TimeMesh> uniform(double horizon, int steps);
  static std::shared_ptr<const TimeMesh> graded(double horizon, int steps, double r);
  // Takes ownership of an explicit node list (t_0 = 0, strictly increasing).
  static std::shared_ptr<const TimeMesh> from_nodes(std::vector<double> nodes);

  double horizon() const { return nodes_.back(); }
  double grading() const { return grading_; }
  const std::vector<double>& nodes() const { return nodes_; }
  std::size_t size() const { return nodes_.size(); }
  double node(std::size_t i) const { return nodes_[i]; }
  bool is_uniform() const { return uniform_; }

 private:
  TimeMesh(std::vector<double> nodes, double grading);
  std::vector<double> nodes_;
  double grading_ = 1.0;
  bool uniform_ = false;
};

using MeshPtr = std::shared_ptr<const TimeMesh>;

// A scalar path sampled on a mesh, one value per node.
struct SampledPath {
  MeshPtr mesh;
  std::vector<double> values;

  SampledPath() = default;
  SampledPath(MeshPtr m, std::vector<double> v);
  std::size_t size() const { return values.size(); }
};

SampledPath sample(const MeshPtr& mesh, const std::function<double(double)>& f);

}  // namespace fracwave

#endif
