#include "semimg/hierarchy.hpp"

#include "semimg/error.hpp"
#include "semimg/problems.hpp"

#include <string>

namespace semimg {

Hierarchy::Hierarchy(Mesh base, DiffusionCoefficient diffusion, HierarchyOptions options)
    : diffusion_(diffusion), options_(options), stack_(options.smoother) {
  require(options_.coarse_index >= 0, ErrorCategory::invalid_argument, "Hierarchy: coarse index must be >= 0");
  spaces_.push_back(build_fespace(std::move(base)));
  stack_.push_level(assemble_stiffness(spaces_.back(), diffusion_, options_.exec));
  rebuild_embeddings();
}

void Hierarchy::add_level(Mesh fine) {
  require(fine.has_genealogy(), ErrorCategory::precondition, "add_level: mesh has no genealogy");
  FESpace space = build_fespace(std::move(fine));
  require(space.num_free() > spaces_.back().num_free(), ErrorCategory::precondition,
          "add_level: level " + std::to_string(num_levels()) + " is not strictly larger than its parent");
  CsrMatrix p = semimg::prolongation(spaces_.back(), space);
  stack_.push_level(assemble_stiffness(space, diffusion_, options_.exec), std::move(p));
  spaces_.push_back(std::move(space));
  rebuild_embeddings();
}

void Hierarchy::set_coarse_index(int index) {
  require(index >= 0 && index < num_levels(), ErrorCategory::invalid_argument,
          "set_coarse_index: index " + std::to_string(index) + " outside the hierarchy");
  options_.coarse_index = index;
  embeddings_.clear();
  rebuild_embeddings();
}

// Extends the composed embeddings to cover every existing level.
void Hierarchy::rebuild_embeddings() {
  const int c = options_.coarse_index;
  while (c < num_levels() && static_cast<int>(embeddings_.size()) < num_levels() - c) {
    const int k = c + static_cast<int>(embeddings_.size());
    embeddings_.push_back(k == c ? identity_matrix(space(c).num_free())
                                 : multiply(prolongation(k), embeddings_.back()));
  }
}

const CsrMatrix& Hierarchy::coarse_embedding(int k) const {
  require(k >= options_.coarse_index && k < num_levels(), ErrorCategory::precondition,
          "coarse_embedding: level " + std::to_string(k) + " is coarser than the coarse space");
  return embeddings_.at(k - options_.coarse_index);
}

Vector Hierarchy::prolongate(std::span<const double> u, int from, int to) const {
  require(from >= 0 && from <= to && to < num_levels(), ErrorCategory::invalid_argument,
          "prolongate: bad level range");
  require(static_cast<int>(u.size()) == num_free(from), ErrorCategory::invalid_argument,
          "prolongate: vector does not live on level " + std::to_string(from));
  Vector v(u.begin(), u.end());
  for (int k = from + 1; k <= to; ++k) v = multiply(prolongation(k), v, options_.exec);
  return v;
}

Hierarchy build_hierarchy(const ProblemSpec& problem, int n_levels, int base_n, HierarchyOptions options) {
  require(n_levels >= 1, ErrorCategory::invalid_argument, "build_hierarchy: n_levels must be >= 1");
  require(options.coarse_index < n_levels, ErrorCategory::invalid_argument,
          "build_hierarchy: coarse index beyond the finest level");
  Mesh mesh = domain_mesh(problem.domain, base_n);
  Mesh next = n_levels > 1 ? uniform_refine(mesh) : Mesh{};
  Hierarchy h(std::move(mesh), problem.diffusion, options);
  for (int k = 1; k < n_levels; ++k) {
    Mesh after = k + 1 < n_levels ? uniform_refine(next) : Mesh{};
    h.add_level(std::move(next));
    next = std::move(after);
  }
  return h;
}

}  // namespace semimg
