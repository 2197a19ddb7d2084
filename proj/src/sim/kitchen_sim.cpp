#include "sim/kitchen_sim.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <queue>
#include <random>
#include <unordered_map>

#include "core/error.hpp"

namespace bcr::sim {

namespace {

enum class Op {
  kGrab, kPut, kPutIn, kOpen, kClose, kWalkToObject, kWalkToRoom, kScanRoom,
  kToggleOn, kSlice, kTurnLeft, kTurnRight, kMoveForward, kMoveBackward,
  kLookUp, kLookDown,
};

enum class Pred {
  kIsVisible, kIsHolding, kHandEmpty, kIsNear, kIsOpen, kIsOn, kIsSliced,
  kOn, kInside, kInRoom, kObjectInRoom,
};

constexpr int kKitchen = 0;
constexpr int kHallway = 1;
const char* const kRoomNames[] = {"kitchen", "hallway"};
constexpr const char* kAgentId = "character";

struct CAtom {
  Pred pred;
  int a = -1;
  int b = -1;
};

struct CLiteral {
  CAtom atom;
  bool value;
};

struct CAction {
  Op op;
  int a = -1;
  int b = -1;
  std::vector<std::vector<CLiteral>> triggers;  // one per blocking condition
  bool valid = true;
  std::string error;
};

std::optional<Op> op_from_name(const std::string& name) {
  static const std::map<std::string, Op> ops = {
      {"grab", Op::kGrab}, {"put", Op::kPut}, {"putin", Op::kPutIn},
      {"open", Op::kOpen}, {"close", Op::kClose},
      {"walk_to_object", Op::kWalkToObject}, {"walk_to_room", Op::kWalkToRoom},
      {"scanroom", Op::kScanRoom}, {"toggle_on", Op::kToggleOn},
      {"slice", Op::kSlice}, {"turnleft", Op::kTurnLeft},
      {"turnright", Op::kTurnRight}, {"moveforward", Op::kMoveForward},
      {"movebackward", Op::kMoveBackward}, {"lookup", Op::kLookUp},
      {"lookdown", Op::kLookDown}};
  auto it = ops.find(name);
  if (it == ops.end()) return std::nullopt;
  return it->second;
}

std::optional<Pred> pred_from_name(const std::string& name) {
  static const std::map<std::string, Pred> preds = {
      {"isVisible", Pred::kIsVisible}, {"isHolding", Pred::kIsHolding},
      {"handEmpty", Pred::kHandEmpty}, {"isNear", Pred::kIsNear},
      {"isOpen", Pred::kIsOpen}, {"isOn", Pred::kIsOn},
      {"isSliced", Pred::kIsSliced}, {"On", Pred::kOn},
      {"Inside", Pred::kInside}, {"inRoom", Pred::kInRoom},
      {"objectInRoom", Pred::kObjectInRoom}};
  auto it = preds.find(name);
  if (it == preds.end()) return std::nullopt;
  return it->second;
}

int room_index(const std::string& id) {
  if (id == "kitchen") return kKitchen;
  if (id == "hallway") return kHallway;
  return -1;
}

}  // namespace

struct ObjSpec {
  std::string id;
  std::string category;
  Kind kind;
  bool openable = false;
  bool pickupable = false;
  bool receptacle = false;
  bool toggleable = false;
  bool sliceable = false;
  int station = -1;       // fixtures: the front station
  int side_station = -1;  // fixtures approached from the side by default
};

struct StationSpec {
  std::string name;
  int room = kKitchen;
  int anchor = -1;  // fixture at this station
  bool side = false;
};

struct Layout {
  std::vector<ObjSpec> objects;
  std::vector<StationSpec> stations;
  std::map<std::string, int> index;
  int kitchen_entry = -1;
  int kitchen_center = -1;
  int hallway = -1;

  int find(const std::string& id) const {
    auto it = index.find(id);
    return it == index.end() ? -1 : it->second;
  }
};

struct DistanceCache {
  std::unordered_map<std::string, int> dist;  // -1: goal unreachable
  std::unordered_map<std::string, CAction> compiled;
};

namespace {

std::shared_ptr<const Layout> build_layout() {
  auto L = std::make_shared<Layout>();
  auto add = [&](ObjSpec o) {
    L->index[o.id] = static_cast<int>(L->objects.size());
    L->objects.push_back(std::move(o));
  };
  auto container = [&](const std::string& id) {
    add({id, "container", Kind::kContainer, true, false, true, false, false});
  };
  auto surface = [&](const std::string& id) {
    add({id, "surface", Kind::kSurface, false, false, true, false, false});
  };
  auto appliance = [&](const std::string& id) {
    add({id, "appliance", Kind::kAppliance, false, false, true, true, false});
  };
  container("fridge_1");
  container("cabinet_1");
  container("cabinet_2");
  container("drawer_1");
  surface("counter_1");
  surface("table_1");
  surface("sink_1");
  appliance("coffeemachine_1");
  appliance("toaster_1");
  add({"faucet_1", "fixture", Kind::kFixture, false, false, false, true, false});
  const int fixtures = static_cast<int>(L->objects.size());
  auto item = [&](const std::string& id, bool sliceable) {
    add({id, "item", Kind::kItem, false, true, false, false, sliceable});
  };
  item("apple_1", true);
  item("mug_1", false);
  item("bread_1", true);
  add({"knife_1", "tool", Kind::kTool, false, true, false, false, false});
  item("egg_1", false);
  item("tomato_1", true);
  item("plate_1", false);

  for (int i = 0; i < fixtures; ++i) {
    L->objects[i].station = static_cast<int>(L->stations.size());
    L->stations.push_back({L->objects[i].id, kKitchen, i, false});
  }
  const int fridge = L->find("fridge_1");
  L->objects[fridge].side_station = static_cast<int>(L->stations.size());
  L->stations.push_back({"fridge_1_side", kKitchen, fridge, true});
  L->kitchen_center = static_cast<int>(L->stations.size());
  L->stations.push_back({"kitchen_center", kKitchen, -1, false});
  L->kitchen_entry = static_cast<int>(L->stations.size());
  L->stations.push_back({"kitchen_entry", kKitchen, -1, false});
  L->hallway = static_cast<int>(L->stations.size());
  L->stations.push_back({"hallway", kHallway, -1, false});
  return L;
}

const std::shared_ptr<const Layout>& layout() {
  static const std::shared_ptr<const Layout> L = build_layout();
  return L;
}

using State = KitchenSim::State;

bool is_concealed(const Layout& L, const State& s, int o) {
  const int loc = s.objects[o].location;
  return loc >= 0 && L.objects[loc].openable && !s.objects[loc].open;
}

bool is_visible(const Layout& L, const State& s, int o) {
  if (s.agent.held == o) return true;
  if (s.agent.facing != Facing::kNorth || s.agent.pitch != Pitch::kLevel)
    return false;
  const int gaze = s.agent.gaze;
  if (gaze < 0) return false;
  if (gaze == o) return !is_concealed(L, s, o);
  const int loc = s.objects[o].location;
  if (loc < 0 || loc != gaze || !L.objects[loc].openable || !s.objects[loc].open)
    return false;
  const StationSpec& st = L.stations[s.agent.station];
  return st.anchor == loc && !st.side;
}

int object_room(const Layout& L, const State& s, int o) {
  if (s.agent.held == o) return L.stations[s.agent.station].room;
  const int loc = s.objects[o].location;
  const int fixture = loc >= 0 ? loc : o;
  const int station = L.objects[fixture].station;
  return station >= 0 ? L.stations[station].room : kKitchen;
}

bool eval(const Layout& L, const State& s, const CAtom& a) {
  switch (a.pred) {
    case Pred::kIsVisible: return is_visible(L, s, a.a);
    case Pred::kIsHolding: return s.agent.held == a.a;
    case Pred::kHandEmpty: return s.agent.held < 0;
    case Pred::kIsNear: return L.stations[s.agent.station].anchor == a.a;
    case Pred::kIsOpen: return s.objects[a.a].open;
    case Pred::kIsOn: return s.objects[a.a].on;
    case Pred::kIsSliced: return s.objects[a.a].sliced;
    case Pred::kOn:
      return s.objects[a.a].location == a.b && !L.objects[a.b].openable;
    case Pred::kInside:
      return s.objects[a.a].location == a.b && L.objects[a.b].openable;
    case Pred::kInRoom: return L.stations[s.agent.station].room == a.b;
    case Pred::kObjectInRoom: return object_room(L, s, a.a) == a.b;
  }
  return false;
}

// Resolves one atom argument: object index, room index or the agent (0).
std::optional<int> resolve_arg(const Layout& L, Pred p, size_t position,
                               const std::string& id) {
  const bool room_slot = (p == Pred::kInRoom || p == Pred::kObjectInRoom) &&
                         position == 1;
  if (room_slot) {
    int r = room_index(id);
    return r < 0 ? std::nullopt : std::optional<int>(r);
  }
  if (id == kAgentId) return 0;
  int i = L.find(id);
  return i < 0 ? std::nullopt : std::optional<int>(i);
}

std::optional<CAtom> compile_atom(const Layout& L, const Atom& atom) {
  auto p = pred_from_name(atom.predicate);
  if (!p) return std::nullopt;
  CAtom out{*p};
  for (size_t i = 0; i < atom.args.size(); ++i) {
    auto r = resolve_arg(L, *p, i, atom.args[i]);
    if (!r) return std::nullopt;
    (i == 0 ? out.a : out.b) = *r;
  }
  if (*p == Pred::kInRoom) out.a = 0;
  return out;
}

CAction compile_action(const Layout& L, const Domain& D,
                       const GroundedAction& action) {
  CAction c{Op::kGrab};
  auto op = op_from_name(action.schema);
  const ActionSchema* schema = D.schema(action.schema);
  if (!op || !schema) {
    c.valid = false;
    c.error = "unknown action " + action.schema;
    return c;
  }
  c.op = *op;
  std::vector<int> idx;
  for (const auto& arg : action.args) {
    int i = L.find(arg);
    if (i < 0) i = room_index(arg);
    if (i < 0 && arg == kAgentId) i = 0;
    if (i < 0) {
      c.valid = false;
      c.error = "unknown object " + arg;
      return c;
    }
    idx.push_back(i);
  }
  if (!idx.empty()) c.a = idx[0];
  if (idx.size() > 1) c.b = idx[1];
  for (const auto& cond : schema->blocking_conditions) {
    GroundCondition g = ground_condition(*schema, cond, action);
    std::vector<CLiteral> trig;
    for (const auto& l : g.trigger) {
      auto atom = compile_atom(L, l.atom);
      if (!atom) {
        c.valid = false;
        c.error = "unknown object in " + l.to_string();
        return c;
      }
      trig.push_back({*atom, l.value == TruthValue::kTrue});
    }
    c.triggers.push_back(std::move(trig));
  }
  return c;
}

struct StepOutcome {
  Outcome outcome = Outcome::kSuccess;
  int condition = -1;
  std::string error;
};

void face_forward(State& s) {
  s.agent.facing = Facing::kNorth;
  s.agent.pitch = Pitch::kLevel;
}

StepOutcome apply(const Layout& L, const CAction& c, State& s) {
  if (!c.valid) return {Outcome::kError, -1, c.error};
  for (size_t i = 0; i < c.triggers.size(); ++i) {
    const auto& trig = c.triggers[i];
    if (trig.empty()) continue;
    bool all = std::all_of(trig.begin(), trig.end(), [&](const CLiteral& l) {
      return eval(L, s, l.atom) == l.value;
    });
    if (all) return {Outcome::kBlocked, static_cast<int>(i), {}};
  }
  auto& agent = s.agent;
  switch (c.op) {
    case Op::kGrab:
      agent.held = static_cast<int16_t>(c.a);
      s.objects[c.a].location = -1;
      break;
    case Op::kPut:
    case Op::kPutIn:
      if (!L.objects[c.b].receptacle)
        return {Outcome::kError, -1, L.objects[c.b].id + " is not a receptacle"};
      s.objects[c.a].location = static_cast<int16_t>(c.b);
      agent.held = -1;
      if (c.op == Op::kPut) agent.gaze = static_cast<int16_t>(c.a);
      break;
    case Op::kOpen: s.objects[c.a].open = true; break;
    case Op::kClose: s.objects[c.a].open = false; break;
    case Op::kWalkToObject: {
      const ObjSpec& f = L.objects[c.a];
      agent.station = static_cast<int16_t>(f.side_station >= 0 ? f.side_station : f.station);
      agent.gaze = static_cast<int16_t>(c.a);
      face_forward(s);
      break;
    }
    case Op::kWalkToRoom:
      agent.station = static_cast<int16_t>(c.a == kKitchen ? L.kitchen_entry : L.hallway);
      agent.gaze = -1;
      face_forward(s);
      break;
    case Op::kScanRoom:
      if (agent.held != c.a && !is_concealed(L, s, c.a)) {
        agent.station = static_cast<int16_t>(L.kitchen_center);
        agent.gaze = static_cast<int16_t>(c.a);
        face_forward(s);
      }
      break;
    case Op::kToggleOn:
      if (!L.objects[c.a].toggleable)
        return {Outcome::kError, -1, L.objects[c.a].id + " cannot be switched on"};
      s.objects[c.a].on = true;
      break;
    case Op::kSlice:
      if (!L.objects[c.a].sliceable)
        return {Outcome::kError, -1, L.objects[c.a].id + " cannot be sliced"};
      s.objects[c.a].sliced = true;
      break;
    case Op::kTurnLeft:
      agent.facing = static_cast<Facing>((static_cast<int>(agent.facing) + 3) % 4);
      break;
    case Op::kTurnRight:
      agent.facing = static_cast<Facing>((static_cast<int>(agent.facing) + 1) % 4);
      break;
    case Op::kMoveForward: {
      const StationSpec& st = L.stations[agent.station];
      if (st.side) agent.station = static_cast<int16_t>(L.objects[st.anchor].station);
      break;
    }
    case Op::kMoveBackward: {
      const StationSpec& st = L.stations[agent.station];
      if (!st.side && st.anchor >= 0 && L.objects[st.anchor].side_station >= 0)
        agent.station = static_cast<int16_t>(L.objects[st.anchor].side_station);
      break;
    }
    case Op::kLookUp:
      agent.pitch = agent.pitch == Pitch::kDown ? Pitch::kLevel : Pitch::kUp;
      break;
    case Op::kLookDown:
      agent.pitch = agent.pitch == Pitch::kUp ? Pitch::kLevel : Pitch::kDown;
      break;
  }
  return {};
}

std::string state_key(const State& s) {
  std::string k;
  k.reserve(s.objects.size() * 5 + 8);
  auto put16 = [&](int16_t v) {
    k.push_back(static_cast<char>(v & 0xff));
    k.push_back(static_cast<char>((v >> 8) & 0xff));
  };
  put16(s.agent.station);
  put16(s.agent.held);
  put16(s.agent.gaze);
  k.push_back(static_cast<char>(s.agent.facing));
  k.push_back(static_cast<char>(s.agent.pitch));
  for (const auto& o : s.objects) {
    put16(o.location);
    k.push_back(static_cast<char>(o.open | (o.on << 1) | (o.sliced << 2)));
  }
  return k;
}

std::vector<CLiteral> compile_goal(const Layout& L, const std::vector<Literal>& goal) {
  std::vector<CLiteral> out;
  for (const auto& l : goal)
    if (auto a = compile_atom(L, l.atom)) out.push_back({*a, certain(l.value) == TruthValue::kTrue});
  return out;
}

bool satisfies(const Layout& L, const State& s, const std::vector<CLiteral>& goal) {
  return std::all_of(goal.begin(), goal.end(),
                     [&](const CLiteral& l) { return eval(L, s, l.atom) == l.value; });
}

struct Placement {
  std::string object;
  std::vector<std::string> options;
};

std::vector<Placement> placements_for(const std::string& task) {
  std::vector<Placement> p = {
      {"apple_1", {"table_1", "counter_1", "cabinet_1"}},
      {"mug_1", {"cabinet_2", "counter_1", "table_1"}},
      {"bread_1", {"counter_1", "table_1", "fridge_1"}},
      {"knife_1", {"drawer_1", "counter_1", "table_1"}},
      {"egg_1", {"fridge_1", "counter_1"}},
      {"tomato_1", {"table_1", "fridge_1"}},
      {"plate_1", {"cabinet_1", "table_1"}},
  };
  if (task == "coffee") p[1].options = {"cabinet_2", "counter_1", "sink_1"};
  return p;
}

}  // namespace

const char* to_string(Outcome outcome) {
  switch (outcome) {
    case Outcome::kSuccess: return "success";
    case Outcome::kBlocked: return "blocked";
    case Outcome::kError: return "error";
  }
  return "error";
}

KitchenSim::KitchenSim(const Domain& domain, const Problem& problem,
                       uint64_t seed)
    : layout_(layout()),
      domain_(std::make_shared<const Domain>(domain)),
      goal_(problem.goal),
      cache_(std::make_shared<DistanceCache>()) {
  const Layout& L = *layout_;
  for (const auto& inst : problem.instances) {
    int i = L.find(inst.id);
    if (i < 0 || L.objects[i].category != inst.category)
      throw Error(ErrorCode::kUnknownTask,
                  problem.name + ": kitchen has no " + inst.category + " " + inst.id);
    known_.insert(i);
  }
  for (const auto& l : goal_) {
    auto a = compile_atom(L, l.atom);
    if (!a) throw Error(ErrorCode::kUnknownTask, problem.name + ": goal " + l.to_string());
    if (a->pred == Pred::kIsOn) goal_toggles_.push_back(a->a);
    if (a->pred == Pred::kInside) goal_containers_.push_back(a->b);
    for (int x : {a->a, a->b})
      if (a->pred != Pred::kInRoom && x >= 0 && L.objects[x].pickupable &&
          std::find(relevant_.begin(), relevant_.end(), x) == relevant_.end())
        relevant_.push_back(x);
  }
  for (const auto& inst : problem.instances) {
    int i = L.find(inst.id);
    if (L.objects[i].kind == Kind::kTool &&
        std::find(relevant_.begin(), relevant_.end(), i) == relevant_.end())
      relevant_.push_back(i);
  }
  std::sort(relevant_.begin(), relevant_.end());

  std::mt19937_64 rng(seed);
  state_.objects.assign(L.objects.size(), {});
  for (const auto& p : placements_for(problem.name)) {
    const int o = L.find(p.object);
    const size_t pick = static_cast<size_t>(rng() % p.options.size());
    state_.objects[o].location = static_cast<int16_t>(L.find(p.options[pick]));
  }
  const int starts[] = {L.kitchen_entry, L.find("counter_1"),
                        L.objects[L.find("table_1")].station, L.hallway};
  int start = starts[rng() % 4];
  if (start == L.find("counter_1")) start = L.objects[start].station;
  state_.agent.station = static_cast<int16_t>(start);
  initial_state_ = state_;
  initial_obs_ = observe();
}

std::unique_ptr<World> KitchenSim::clone() const {
  return std::unique_ptr<World>(new KitchenSim(*this));
}

int KitchenSim::index_of(const std::string& id) const { return layout_->find(id); }

ExecResult KitchenSim::execute(const GroundedAction& action) {
  ++step_count_;
  const std::string text = action.text();
  auto it = cache_->compiled.find(text);
  if (it == cache_->compiled.end())
    it = cache_->compiled.emplace(text, compile_action(*layout_, *domain_, action)).first;
  StepOutcome r = apply(*layout_, it->second, state_);
  ExecResult out;
  out.outcome = r.outcome;
  out.error = r.error;
  if (r.outcome == Outcome::kBlocked) {
    const ActionSchema* schema = domain_->schema(action.schema);
    out.condition = ground_condition(*schema, schema->blocking_conditions[r.condition], action);
  }
  out.observation = observe();
  return out;
}

Observation KitchenSim::observe() {
  const Layout& L = *layout_;
  Observation obs;
  for (int i = 0; i < static_cast<int>(L.objects.size()); ++i) {
    if (!known_.count(i) && is_visible(L, state_, i)) {
      known_.insert(i);
      obs.revealed.push_back({L.objects[i].id, L.objects[i].category});
    }
  }
  std::map<Atom, TruthValue> lits;
  auto emit = [&](Atom a, bool v) {
    lits[std::move(a)] = v ? TruthValue::kTrue : TruthValue::kFalse;
  };
  const auto& agent = state_.agent;
  emit({"handEmpty", {kAgentId}}, agent.held < 0);
  for (int r : {kKitchen, kHallway})
    emit({"inRoom", {kAgentId, kRoomNames[r]}}, L.stations[agent.station].room == r);
  for (int i : known_) {
    const ObjSpec& spec = L.objects[i];
    const bool vis = is_visible(L, state_, i);
    emit({"isVisible", {spec.id}}, vis);
    if (!spec.pickupable) {
      const bool near = L.stations[agent.station].anchor == i;
      if (spec.station >= 0) emit({"isNear", {spec.id}}, near);
      // Door and power state of the fixture at hand are readable without looking.
      if ((vis || near) && spec.openable) emit({"isOpen", {spec.id}}, state_.objects[i].open);
      if ((vis || near) && spec.toggleable) emit({"isOn", {spec.id}}, state_.objects[i].on);
      continue;
    }
    emit({"isHolding", {spec.id}}, agent.held == i);
    if (!vis) continue;
    for (int r : known_) {
      const ObjSpec& rs = L.objects[r];
      if (!rs.receptacle) continue;
      emit({rs.openable ? "Inside" : "On", {spec.id, rs.id}},
           state_.objects[i].location == r);
    }
    for (int room : {kKitchen, kHallway})
      emit({"objectInRoom", {spec.id, kRoomNames[room]}},
           object_room(L, state_, i) == room);
    if (spec.kind == Kind::kItem) emit({"isSliced", {spec.id}}, state_.objects[i].sliced);
  }
  for (auto& [atom, value] : lits) obs.literals.push_back({atom, value});
  return obs;
}

bool KitchenSim::truth(const Atom& atom) const {
  auto a = compile_atom(*layout_, atom);
  return a && eval(*layout_, state_, *a);
}

bool KitchenSim::goal_satisfied(const std::vector<Literal>& goal) const {
  return std::all_of(goal.begin(), goal.end(), [&](const Literal& l) {
    return truth(l.atom) == (certain(l.value) == TruthValue::kTrue);
  });
}

std::vector<Literal> KitchenSim::location_facts() const {
  const Layout& L = *layout_;
  std::vector<Literal> out;
  auto fact = [&](Atom a, bool v) {
    out.push_back({std::move(a), v ? TruthValue::kTrue : TruthValue::kFalse});
  };
  for (int i : known_) {
    const ObjSpec& spec = L.objects[i];
    if (spec.openable) fact({"isOpen", {spec.id}}, state_.objects[i].open);
    if (spec.toggleable) fact({"isOn", {spec.id}}, state_.objects[i].on);
    if (!spec.pickupable) continue;
    const int loc = state_.objects[i].location;
    if (loc >= 0)
      fact({L.objects[loc].openable ? "Inside" : "On", {spec.id, L.objects[loc].id}}, true);
    fact({"objectInRoom", {spec.id, kRoomNames[object_room(L, state_, i)]}}, true);
    if (spec.kind == Kind::kItem) fact({"isSliced", {spec.id}}, state_.objects[i].sliced);
  }
  std::sort(out.begin(), out.end());
  return out;
}

SimObject KitchenSim::object(const std::string& id) const {
  const Layout& L = *layout_;
  const int i = L.find(id);
  if (i < 0) throw Error(ErrorCode::kUnknownInstance, id);
  const ObjSpec& spec = L.objects[i];
  const ObjState& st = state_.objects[i];
  SimObject o{spec.id, spec.category, spec.kind};
  if (st.location >= 0) o.location = L.objects[st.location].id;
  o.openable = spec.openable;
  o.open = st.open;
  o.pickupable = spec.pickupable;
  o.held = state_.agent.held == i;
  o.receptacle = spec.receptacle;
  o.toggleable = spec.toggleable;
  o.on = st.on;
  o.sliceable = spec.sliceable;
  o.sliced = st.sliced;
  if (spec.side_station >= 0 && st.open)
    for (size_t j = 0; j < L.objects.size(); ++j)
      if (state_.objects[j].location == i) o.occludes.push_back(L.objects[j].id);
  return o;
}

AgentView KitchenSim::agent() const {
  const Layout& L = *layout_;
  AgentView v;
  const StationSpec& st = L.stations[state_.agent.station];
  v.room = kRoomNames[st.room];
  v.station = st.name;
  v.facing = state_.agent.facing;
  v.pitch = state_.agent.pitch;
  if (state_.agent.held >= 0) v.held = L.objects[state_.agent.held].id;
  return v;
}

bool KitchenSim::visible(const std::string& id) const {
  const int i = index_of(id);
  return i >= 0 && is_visible(*layout_, state_, i);
}

bool KitchenSim::concealed(const std::string& id) const {
  const int i = index_of(id);
  return i >= 0 && is_concealed(*layout_, state_, i);
}

std::vector<std::string> KitchenSim::object_ids() const {
  std::vector<std::string> out;
  for (const auto& o : layout_->objects) out.push_back(o.id);
  return out;
}

std::vector<std::string> KitchenSim::relevant_objects() const {
  std::vector<std::string> out;
  for (int i : relevant_) out.push_back(layout_->objects[i].id);
  return out;
}

bool KitchenSim::needs_information_gathering() const {
  return std::any_of(relevant_.begin(), relevant_.end(), [&](int i) {
    return is_concealed(*layout_, initial_state_, i);
  });
}

// Actions that can matter for reaching the goal from `s`. Turning, looking,
// closing and handling unrelated objects never shorten a plan, so the
// search leaves them out.
std::vector<GroundedAction> KitchenSim::search_actions(const State& s) const {
  const Layout& L = *layout_;
  std::vector<int> movable = relevant_;
  if (s.agent.held >= 0 &&
      std::find(movable.begin(), movable.end(), s.agent.held) == movable.end())
    movable.push_back(s.agent.held);
  std::vector<int> openables = goal_containers_;
  for (int r : movable) {
    const int loc = s.objects[r].location;
    if (loc >= 0 && L.objects[loc].openable &&
        std::find(openables.begin(), openables.end(), loc) == openables.end())
      openables.push_back(loc);
  }
  std::sort(openables.begin(), openables.end());

  std::vector<GroundedAction> out;
  for (size_t f = 0; f < L.objects.size(); ++f)
    if (L.objects[f].station >= 0) out.push_back({"walk_to_object", {L.objects[f].id}});
  out.push_back({"walk_to_room", {"kitchen"}});
  out.push_back({"moveforward", {}});
  out.push_back({"movebackward", {}});
  for (int c : openables) out.push_back({"open", {L.objects[c].id}});
  for (int t : goal_toggles_) out.push_back({"toggle_on", {L.objects[t].id}});
  for (int r : movable) {
    const std::string& id = L.objects[r].id;
    out.push_back({"grab", {id}});
    out.push_back({"scanroom", {id, "kitchen"}});
    for (size_t x = 0; x < L.objects.size(); ++x) {
      if (!L.objects[x].receptacle) continue;
      if (L.objects[x].openable) {
        if (std::find(openables.begin(), openables.end(), static_cast<int>(x)) != openables.end())
          out.push_back({"putin", {id, L.objects[x].id}});
      } else {
        out.push_back({"put", {id, L.objects[x].id}});
      }
    }
    if (L.objects[r].sliceable)
      for (int k : movable)
        if (L.objects[k].kind == Kind::kTool) out.push_back({"slice", {id, L.objects[k].id}});
  }
  return out;
}

std::optional<int> KitchenSim::distance_to_goal() const {
  const Layout& L = *layout_;
  const std::string root = state_key(state_);
  if (auto it = cache_->dist.find(root); it != cache_->dist.end())
    return it->second < 0 ? std::nullopt : std::optional<int>(it->second);

  const auto goal = compile_goal(L, goal_);
  auto is_goal = [&](const State& s) { return satisfies(L, s, goal); };

  // Forward sweep over states not yet cached, then a backward unit-cost
  // Dijkstra seeded by goal states and by already-cached frontier states.
  std::unordered_map<std::string, int> id;
  std::vector<State> states;
  std::vector<std::vector<int>> preds;
  std::vector<std::pair<int, int>> seeds;  // (state, distance)
  std::deque<int> queue;
  id.emplace(root, 0);
  states.push_back(state_);
  preds.emplace_back();
  queue.push_back(0);
  std::vector<int> expanded{0};
  constexpr size_t kMaxStates = 400000;
  while (!queue.empty()) {
    const int cur = queue.front();
    queue.pop_front();
    const State s = states[cur];
    if (is_goal(s)) {
      seeds.emplace_back(cur, 0);
      continue;
    }
    for (const auto& a : search_actions(s)) {
      const std::string text = a.text();
      auto c = cache_->compiled.find(text);
      if (c == cache_->compiled.end())
        c = cache_->compiled.emplace(text, compile_action(L, *domain_, a)).first;
      State next = s;
      if (apply(L, c->second, next).outcome != Outcome::kSuccess || next == s) continue;
      const std::string key = state_key(next);
      if (auto hit = cache_->dist.find(key); hit != cache_->dist.end()) {
        if (hit->second >= 0) seeds.emplace_back(cur, hit->second + 1);
        continue;
      }
      auto [it, inserted] = id.emplace(key, static_cast<int>(states.size()));
      if (inserted) {
        states.push_back(std::move(next));
        preds.emplace_back();
        if (states.size() < kMaxStates) {
          queue.push_back(it->second);
          expanded.push_back(it->second);
        }
      }
      preds[it->second].push_back(cur);
    }
  }
  std::vector<int> dist(states.size(), -1);
  using Item = std::pair<int, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  for (auto [s, d] : seeds) pq.push({d, s});
  while (!pq.empty()) {
    auto [d, s] = pq.top();
    pq.pop();
    if (dist[s] >= 0 && dist[s] <= d) continue;
    dist[s] = d;
    for (int p : preds[s])
      if (dist[p] < 0 || dist[p] > d + 1) pq.push({d + 1, p});
  }
  for (int idx : expanded) cache_->dist.emplace(state_key(states[idx]), dist[idx]);
  return dist[0] < 0 ? std::nullopt : std::optional<int>(dist[0]);
}

std::optional<std::vector<GroundedAction>> KitchenSim::min_plan() const {
  const Layout& L = *layout_;
  const auto goal = compile_goal(L, goal_);
  if (satisfies(L, state_, goal)) return std::vector<GroundedAction>{};
  struct Node {
    State state;
    int parent;
    GroundedAction action;
  };
  std::vector<Node> nodes{{state_, -1, {}}};
  std::unordered_map<std::string, int> seen{{state_key(state_), 0}};
  for (size_t head = 0; head < nodes.size(); ++head) {
    const State s = nodes[head].state;
    for (const auto& a : search_actions(s)) {
      const std::string text = a.text();
      auto c = cache_->compiled.find(text);
      if (c == cache_->compiled.end())
        c = cache_->compiled.emplace(text, compile_action(L, *domain_, a)).first;
      State next = s;
      if (apply(L, c->second, next).outcome != Outcome::kSuccess) continue;
      if (!seen.emplace(state_key(next), static_cast<int>(nodes.size())).second) continue;
      nodes.push_back({next, static_cast<int>(head), a});
      if (satisfies(L, next, goal)) {
        std::vector<GroundedAction> plan;
        for (int n = static_cast<int>(nodes.size()) - 1; n > 0; n = nodes[n].parent)
          plan.push_back(nodes[n].action);
        std::reverse(plan.begin(), plan.end());
        return plan;
      }
    }
  }
  return std::nullopt;
}

}  // namespace bcr::sim
