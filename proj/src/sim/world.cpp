#include "sim/world.hpp"

#include "core/error.hpp"
#include "sim/kitchen_sim.hpp"
#include "sim/milk_world.hpp"

namespace bcr::sim {

std::unique_ptr<World> make_world(const Domain& domain, const Problem& problem,
                                  uint64_t seed) {
  if (domain.name == "kitchen") return std::make_unique<KitchenSim>(domain, problem, seed);
  if (domain.name == "milk") return std::make_unique<MilkWorld>(domain, problem);
  throw Error(ErrorCode::kUnknownTask, "no simulator for domain " + domain.name);
}

}  // namespace bcr::sim
