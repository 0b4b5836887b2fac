#pragma once

#include "semimg/assemble.hpp"
#include "semimg/exec.hpp"
#include "semimg/fespace.hpp"
#include "semimg/mesh.hpp"
#include "semimg/multigrid.hpp"

#include <memory>
#include <vector>

namespace semimg {

struct ProblemSpec;

struct HierarchyOptions {
  /// Level whose space serves as the coarse correction space.
  int coarse_index = 0;
  SmootherConfig smoother;
  Exec exec = Exec::parallel;
};

/// Nested P1 spaces V_0 (coarsest) subset V_1 subset ... with stiffness
/// matrices, prolongations, the multigrid stack, and the composed embedding
/// of the designated coarse space into every finer level.
///
/// Levels are numbered from 0. Every added mesh must carry genealogy with
/// respect to the current finest mesh, so uniform and adaptive refinement
/// both produce valid hierarchies.
class Hierarchy {
 public:
  Hierarchy(Mesh base, DiffusionCoefficient diffusion, HierarchyOptions options = {});

  /// Appends a mesh refined from the finest one. Throws precondition if the
  /// new space is not strictly larger or the genealogy does not fit.
  void add_level(Mesh fine);

  int num_levels() const { return static_cast<int>(spaces_.size()); }
  int finest() const { return num_levels() - 1; }
  int coarse_index() const { return options_.coarse_index; }
  void set_coarse_index(int index);
  Exec exec() const { return options_.exec; }

  const Mesh& mesh(int k) const { return *spaces_.at(k).mesh; }
  const FESpace& space(int k) const { return spaces_.at(k); }
  int num_free(int k) const { return spaces_.at(k).num_free(); }
  const CsrMatrix& stiffness(int k) const { return stack_.stiffness(k); }
  /// Prolongation from level k-1 to level k (k >= 1).
  const CsrMatrix& prolongation(int k) const { return stack_.prolongation(k); }
  /// Composed prolongation from the coarse level to level k (k >= coarse_index).
  const CsrMatrix& coarse_embedding(int k) const;
  const MGLevelStack& stack() const { return stack_; }
  const DiffusionCoefficient& diffusion() const { return diffusion_; }

  /// Maps a level-`from` nodal vector onto level `to` >= from.
  Vector prolongate(std::span<const double> u, int from, int to) const;

 private:
  void rebuild_embeddings();

  DiffusionCoefficient diffusion_;
  HierarchyOptions options_;
  std::vector<FESpace> spaces_;
  MGLevelStack stack_;
  std::vector<CsrMatrix> embeddings_;
};

/// Uniformly refined hierarchy over the problem domain: base mesh with
/// `base_n` cells per unit length, then n_levels - 1 red refinements.
Hierarchy build_hierarchy(const ProblemSpec& problem, int n_levels, int base_n, HierarchyOptions options = {});

}  // namespace semimg
