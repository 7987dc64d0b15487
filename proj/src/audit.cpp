#include <fstream>
#include <ostream>
#include <sstream>

#include "json_support.hpp"
#include "nkgov/engine.hpp"
#include "nkgov/error.hpp"

namespace nkgov {

using ojson = nlohmann::ordered_json;
using detail::json;

std::string audit_record_json(const AuditRecord& r) {
  ojson j;
  j["seq"] = r.sequence;
  j["ts"] = r.timestamp;
  j["intent"] = r.intent;
  j["actionIndex"] = r.action_index;
  j["action"] = ojson::parse(action_to_json(r.action));
  j["trace"] = {{"observation", r.trace.observation},
                {"diagnosis", r.trace.diagnosis},
                {"plan", r.trace.plan}};
  j["preHash"] = r.pre_hash;
  j["postHash"] = r.post_hash;
  return j.dump();
}

std::string verdict_line_json(const Verdict& v, const std::string& intent, std::int64_t ts) {
  ojson j;
  j["ts"] = ts;
  j["intent"] = intent;
  j["outcome"] = std::string(to_string(v.outcome));
  j["kind"] = std::string(to_string(v.kind));
  j["reason"] = v.reason;
  j["failedActionIndex"] = v.failed_action_index ? ojson(*v.failed_action_index) : ojson(nullptr);
  return j.dump();
}

void export_audit(const GovernResult& result, const std::string& intent, std::int64_t ts,
                  std::ostream& sink) {
  for (const auto& r : result.records) sink << audit_record_json(r) << '\n';
  if (!result.verdict.accepted()) sink << verdict_line_json(result.verdict, intent, ts) << '\n';
  if (!sink) throw Error(ErrorCode::IoError, "audit sink write failed");
}

void export_audit_file(const GovernResult& result, const std::string& intent, std::int64_t ts,
                       const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::app);
  if (!out) throw Error(ErrorCode::IoError, "cannot open audit log '" + path.string() + "'");
  export_audit(result, intent, ts, out);
}

ReplayResult replay_audit(const Graph& start, std::string_view jsonl) {
  ReplayResult res{start.snapshot(), 0, true, {}};
  std::istringstream in{std::string(jsonl)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const json j = detail::parse_json(line, "audit:" + std::to_string(lineno));
    if (!j.contains("seq")) continue;

    const auto ctx = "audit:" + std::to_string(lineno);
    const auto pre = detail::get_field<std::string>(j, "preHash", ctx);
    const auto post = detail::get_field<std::string>(j, "postHash", ctx);
    if (graph_hash(res.graph) != pre) {
      res.chain_ok = false;
      res.error = ctx + ": preHash does not match replayed state";
      return res;
    }
    res.graph.advance_clock(detail::get_field<std::int64_t>(j, "ts", ctx));
    apply_action(res.graph, action_from_json(j.at("action").dump()));
    ++res.applied;
    if (graph_hash(res.graph) != post) {
      res.chain_ok = false;
      res.error = ctx + ": postHash does not match replayed state";
      return res;
    }
  }
  return res;
}

}  // namespace nkgov
