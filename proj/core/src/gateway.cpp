#include "addrless/gateway.hpp"

#include <vector>

namespace addrless {

std::size_t FlowKeyHash::operator()(const FlowKey& key) const noexcept {
  Ipv6AddressHash h;
  std::size_t seed = h(key.src);
  seed ^= h(key.dst) + 0x9E3779B97F4A7C15ULL + (seed << 6) + (seed >> 2);
  const std::uint64_t tail = (static_cast<std::uint64_t>(key.src_port) << 24) |
                             (static_cast<std::uint64_t>(key.dst_port) << 8) | key.protocol;
  seed ^= tail * 0xBF58476D1CE4E5B9ULL + (seed << 6) + (seed >> 2);
  return seed;
}

std::string_view verdict_name(Verdict v) noexcept {
  switch (v) {
    case Verdict::AdmitNew:
      return "admit";
    case Verdict::PassEstablished:
      return "pass";
    case Verdict::Drop:
      return "drop";
  }
  return "drop";
}

std::string_view reason_name(VerdictReason r) noexcept {
  switch (r) {
    case VerdictReason::InWindow:
      return "in-window";
    case VerdictReason::Table:
      return "table";
    case VerdictReason::OutOfWindow:
      return "out-of-window";
    case VerdictReason::Cache:
      return "cache";
  }
  return "out-of-window";
}

std::string format_verdict_log(const Decision& decision, const FlowKey& key) {
  std::string line = "verdict=";
  line += verdict_name(decision.verdict);
  line += " src=" + key.src.to_string();
  line += " dst=" + key.dst.to_string();
  line += " reason=";
  line += reason_name(decision.reason);
  return line;
}

Gateway::Gateway(GatewayConfig config, AddressCodec codec)
    : config_(std::move(config)), retention_ms_(codec.params().window.length_ms()) {
  verifier_ = [codec = std::move(codec), prefix = config_.prefix](
                  const Ipv6Address& src, const Ipv6Address& dst, TimeMs now) {
    return codec.verify(src, dst, prefix, now);
  };
}

Gateway::Gateway(GatewayConfig config, Verifier verifier, std::int64_t cache_retention_ms)
    : config_(std::move(config)), verifier_(std::move(verifier)), retention_ms_(cache_retention_ms) {}

Gateway::Shard& Gateway::shard_for(const FlowKey& key) noexcept {
  return shards_[FlowKeyHash{}(key) % kShards];
}

void Gateway::set_log_sink(std::function<void(const std::string&)> sink) {
  std::lock_guard lock(log_mu_);
  log_sink_ = std::move(sink);
}

Decision Gateway::log(Decision decision, const FlowKey& key) {
  std::lock_guard lock(log_mu_);
  if (log_sink_) log_sink_(format_verdict_log(decision, key));
  return decision;
}

bool Gateway::cache_blocks(const Ipv6Address& dst, TimeMs now_ms) {
  auto it = cache_.find(dst);
  if (it == cache_.end()) return false;
  if (it->second.open_flows > 0) return true;
  if (now_ms - it->second.ended_at > retention_ms_) {
    cache_.erase(it);
    return false;
  }
  return true;
}

Decision Gateway::admit_packet(const FlowKey& key, bool /*is_flow_start*/, TimeMs now_ms) {
  Shard& shard = shard_for(key);
  std::unique_lock lock(shard.mu);

  if (auto it = shard.flows.find(key); it != shard.flows.end()) {
    it->second.last_seen = now_ms;
    lock.unlock();
    return log({Verdict::PassEstablished, VerdictReason::Table}, key);
  }

  Decision decision{Verdict::Drop, VerdictReason::OutOfWindow};
  if (config_.cache_mode) {
    std::lock_guard cache_lock(cache_mu_);
    if (cache_blocks(key.dst, now_ms)) {
      decision.reason = VerdictReason::Cache;
    } else if (verifier_(key.src, key.dst, now_ms)) {
      decision = {Verdict::AdmitNew, VerdictReason::InWindow};
      auto& used = cache_[key.dst];
      ++used.open_flows;
    }
  } else if (verifier_(key.src, key.dst, now_ms)) {
    decision = {Verdict::AdmitNew, VerdictReason::InWindow};
  }

  if (decision.verdict == Verdict::AdmitNew) {
    shard.flows.emplace(key, FlowState{now_ms, now_ms});
  }
  lock.unlock();
  return log(decision, key);
}

void Gateway::release_address(const Ipv6Address& dst, TimeMs now_ms) {
  if (!config_.cache_mode) return;
  std::lock_guard cache_lock(cache_mu_);
  auto& used = cache_[dst];
  if (used.open_flows > 0) --used.open_flows;
  used.ended_at = std::max(used.ended_at, now_ms);
}

void Gateway::record_flow_end(const FlowKey& key, TimeMs now_ms) {
  Shard& shard = shard_for(key);
  std::lock_guard lock(shard.mu);
  if (shard.flows.erase(key) == 0) return;
  release_address(key.dst, now_ms);
}

ExpireCounts Gateway::expire(TimeMs now_ms) {
  ExpireCounts counts;
  for (Shard& shard : shards_) {
    std::lock_guard lock(shard.mu);
    for (auto it = shard.flows.begin(); it != shard.flows.end();) {
      if (now_ms - it->second.last_seen > config_.idle_timeout_ms) {
        release_address(it->first.dst, now_ms);
        it = shard.flows.erase(it);
        ++counts.flows;
      } else {
        ++it;
      }
    }
  }
  std::lock_guard cache_lock(cache_mu_);
  for (auto it = cache_.begin(); it != cache_.end();) {
    if (it->second.open_flows == 0 && now_ms - it->second.ended_at > retention_ms_) {
      it = cache_.erase(it);
      ++counts.cache_entries;
    } else {
      ++it;
    }
  }
  return counts;
}

std::size_t Gateway::flow_count() const {
  std::size_t n = 0;
  for (const Shard& shard : shards_) {
    std::lock_guard lock(shard.mu);
    n += shard.flows.size();
  }
  return n;
}

std::size_t Gateway::cache_size() const {
  std::lock_guard lock(cache_mu_);
  return cache_.size();
}

}  // namespace addrless
