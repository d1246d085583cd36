#include "evfront/export.hpp"

#include <sstream>

namespace evfront {

using nlohmann::json;

std::string keypoints_jsonl(const KeypointSet& keypoints, const Descriptors& descriptors) {
  std::string out;
  for (std::size_t i = 0; i < keypoints.size(); ++i) {
    json j{{"x", keypoints[i].x}, {"y", keypoints[i].y}, {"score", keypoints[i].score}};
    j["descriptor"] = std::vector<float>(descriptors.row(i), descriptors.row(i) + descriptors.dim);
    out += j.dump();
    out += '\n';
  }
  return out;
}

std::string matches_csv(std::span<const Match> matches, const std::vector<std::uint8_t>* inliers) {
  std::ostringstream os;
  os.precision(17);
  os << (inliers ? "index_a,index_b,distance,inlier\n" : "index_a,index_b,distance\n");
  for (std::size_t i = 0; i < matches.size(); ++i) {
    os << matches[i].index_a << ',' << matches[i].index_b << ',' << matches[i].distance;
    if (inliers) os << ',' << int((*inliers)[i]);
    os << '\n';
  }
  return os.str();
}

json frame_result_json(const FrameResult& r, bool elide_descriptors, const std::vector<std::uint8_t>* inliers) {
  json kps = json::array();
  for (std::size_t i = 0; i < r.keypoints.size(); ++i) {
    json k{{"x", r.keypoints[i].x}, {"y", r.keypoints[i].y}, {"score", r.keypoints[i].score}};
    if (!elide_descriptors) {
      const auto row = r.descriptors.row(i);
      k["descriptor"] = std::vector<int>(row.begin(), row.end());
    }
    kps.push_back(std::move(k));
  }
  json matches = json::array();
  for (std::size_t i = 0; i < r.matches_to_previous.size(); ++i) {
    const Match& m = r.matches_to_previous[i];
    json jm{{"index_a", m.index_a}, {"index_b", m.index_b}, {"distance", m.distance}};
    if (inliers) jm["inlier"] = bool((*inliers)[i]);
    matches.push_back(std::move(jm));
  }
  return json{{"tau", r.tau},
              {"version", r.version},
              {"quantization_scale", r.descriptors.scheme.scale},
              {"keypoints", std::move(kps)},
              {"matches", std::move(matches)},
              {"timings_us",
               {{"mcts_preparation", r.timings.mcts_preparation_us},
                {"keypoint_detection", r.timings.keypoint_detection_us},
                {"matching", r.timings.matching_us},
                {"total", r.timings.total_us}}}};
}

json metrics_json(const Metrics& m) {
  auto stage = [](const StageStats& s) { return json{{"mean_us", s.mean_us}, {"max_us", s.max_us}}; };
  json j{{"results_emitted", m.results_emitted},
         {"ticks", m.ticks},
         {"versions_applied", m.versions_applied},
         {"events_ingested", m.events_ingested},
         {"events_applied", m.events_applied},
         {"wall_time_s", m.wall_time_s},
         {"iteration_rate_hz", m.iteration_rate_hz},
         {"staleness_mean_us", m.staleness_mean_us},
         {"staleness_max_us", m.staleness_max_us},
         {"writer_lag_max_us", m.writer_lag_max_us},
         {"stages",
          {{"mcts_preparation", stage(m.mcts_preparation)},
           {"keypoint_detection", stage(m.keypoint_detection)},
           {"matching", stage(m.matching)},
           {"total", stage(m.total)}}},
         {"gate",
          {{"writer_stall_max_us", m.gate.writer_stall_max_us},
           {"writer_stall_total_us", m.gate.writer_stall_total_us},
           {"snapshot_copy_max_us", m.gate.copy_max_us},
           {"snapshot_copy_total_us", m.gate.copy_total_us},
           {"snapshots", m.gate.snapshots}}}};
  if (!m.source_error.empty()) j["source_error"] = m.source_error;
  return j;
}

std::string metrics_interval_csv(const Metrics& m) {
  std::ostringstream os;
  os << "interval_start_us,results,mcts_preparation,keypoint_detection,matching,total\n";
  for (const IntervalTimings& i : m.intervals)
    os << i.start << ',' << i.results << ',' << i.mean.mcts_preparation_us << ',' << i.mean.keypoint_detection_us << ','
       << i.mean.matching_us << ',' << i.mean.total_us << '\n';
  return os.str();
}

}  // namespace evfront
