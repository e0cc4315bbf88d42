#include "deltaspec/minilang.hpp"

namespace deltaspec {

CommonPoints diff_common_points(const Unit& pre, const Unit& post) {
  if (pre.name != post.name)
    throw Error(ErrorCode::NameMismatch, "unit names differ: '" + pre.name + "' vs '" + post.name + "'");
  CommonPoints cp;
  cp.shared.push_back(ProgramPoint::invariant(pre.name));

  auto visit = [&](const Method& a, const Method* b) {
    if (!b) {
      cp.removedMethods.insert(a.name);
      return;
    }
    if (a.bodyTokens != b->bodyTokens || !a.same_signature(*b)) cp.changedMethods.insert(a.name);
    if (a.same_signature(*b)) {
      cp.shared.push_back(ProgramPoint::post(pre.name, a.name));
    } else {
      cp.removedMethods.insert(a.name);
      cp.addedMethods.insert(a.name);
    }
  };
  visit(pre.ctor, &post.ctor);
  for (auto& m : pre.methods) visit(m, post.find_method(m.name));
  for (auto& m : post.methods)
    if (!pre.find_method(m.name)) cp.addedMethods.insert(m.name);
  return cp;
}

}  // namespace deltaspec
