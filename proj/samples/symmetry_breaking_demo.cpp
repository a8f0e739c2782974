// Two records that are mirror images, X = (1, 2) and Y = (2, 1), produce
// congruent projection clouds and therefore identical diagrams. Shifting both
// by v = (5, 6) breaks the symmetry and the diagrams separate.

#include <iostream>
#include <vector>

#include "topmix/diagram_metric.hpp"
#include "topmix/persistence.hpp"
#include "topmix/pointcloud.hpp"

namespace {

void show(const char* name, const std::vector<double>& x, double cap, topmix::PersistenceDiagram& out) {
  const auto cloud = topmix::build_point_cloud(x);
  const auto d = topmix::pairwise_distances(cloud);
  out = topmix::rips_dim0_diagram(d, cap);
  std::cout << name << " cloud:";
  for (std::size_t i = 0; i < cloud.size(); ++i)
    std::cout << " (" << cloud.point(i)[0] << ", " << cloud.point(i)[1] << ")";
  std::cout << "\n  distances: " << d(0, 1) << ", " << d(0, 2) << ", " << d(1, 2) << "\n  diagram:";
  for (const auto& p : out.pairs) std::cout << " (" << p.birth << ", " << p.death << ")";
  std::cout << '\n';
}

}  // namespace

int main() {
  const double cap = 20.0;
  topmix::PersistenceDiagram dx, dy, dx2, dy2;
  std::cout << "without symmetry breaking\n";
  show("X", {1, 2}, cap, dx);
  show("Y", {2, 1}, cap, dy);
  std::cout << "W1(X, Y) = " << topmix::wasserstein(dx, dy) << "\n\nwith v = (5, 6)\n";
  show("X'", {6, 8}, cap, dx2);
  show("Y'", {7, 7}, cap, dy2);
  std::cout << "W1(X', Y') = " << topmix::wasserstein(dx2, dy2) << '\n';
}
