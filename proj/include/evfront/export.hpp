#pragma once

#include "evfront/pipeline.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace evfront {

/// One object per keypoint: {x, y, score, descriptor: [D reals]}.
std::string keypoints_jsonl(const KeypointSet& keypoints, const Descriptors& descriptors);

/// index_a,index_b,distance[,inlier]
std::string matches_csv(std::span<const Match> matches, const std::vector<std::uint8_t>* inliers = nullptr);

nlohmann::json frame_result_json(const FrameResult& result, bool elide_descriptors,
                                 const std::vector<std::uint8_t>* inliers = nullptr);

nlohmann::json metrics_json(const Metrics& metrics);

/// interval_start_us,results,mcts_preparation,keypoint_detection,matching,total (µs means)
std::string metrics_interval_csv(const Metrics& metrics);

}  // namespace evfront
