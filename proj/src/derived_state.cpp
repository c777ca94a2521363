#include "senseme/derived_state.hpp"

#include <algorithm>

#include "senseme/error.hpp"
#include "senseme/payloads.hpp"

namespace senseme {

namespace {

bool by_time(const aggregation::SeriesPoint& p, Timestamp t) { return p.t < t; }

}  // namespace

void TimeSeries::upsert(Timestamp t, double value) {
  if (points_.empty() || points_.back().t < t) {
    points_.push_back({t, value});
    return;
  }
  auto it = std::lower_bound(points_.begin(), points_.end(), t, by_time);
  if (it != points_.end() && it->t == t) {
    it->value = value;
  } else {
    points_.insert(it, {t, value});
  }
}

std::optional<Timestamp> TimeSeries::last_at_or_before(Timestamp t) const {
  auto it = std::upper_bound(points_.begin(), points_.end(), t,
                             [](Timestamp v, const aggregation::SeriesPoint& p) { return v < p.t; });
  if (it == points_.begin()) return std::nullopt;
  return std::prev(it)->t;
}

bool TimeSeries::any_in(Timestamp from, Timestamp to) const {
  auto it = std::lower_bound(points_.begin(), points_.end(), from, by_time);
  return it != points_.end() && it->t < to;
}

std::optional<Timestamp> DeviceData::last_seen_at_or_before(Timestamp t) const {
  std::optional<Timestamp> best = motion.last_at_or_before(t);
  auto consider = [&](std::optional<Timestamp> c) {
    if (c && (!best || *c > *best)) best = c;
  };
  consider(audio.last_at_or_before(t));
  auto it = std::upper_bound(sightings.begin(), sightings.end(), t);
  if (it != sightings.begin()) consider(*std::prev(it));
  return best;
}

bool DeviceData::active_in(Timestamp from, Timestamp to) const {
  if (motion.any_in(from, to) || audio.any_in(from, to)) return true;
  auto it = std::lower_bound(sightings.begin(), sightings.end(), from);
  return it != sightings.end() && *it < to;
}

void DerivedState::apply(const EventRecord& record) {
  if (record.seq != head_ + 1) {
    throw Error(ErrorCode::DecodeError, "record seq " + std::to_string(record.seq) +
                                            " does not follow " + std::to_string(head_));
  }
  switch (record.type) {
    case EventType::features: {
      auto batch = payloads::feature_batch_from_json(record.payload);
      auto& dev = devices_[batch.device];
      for (const auto& f : batch.features) {
        (f.kind == features::SensorKind::motion ? dev.motion : dev.audio).upsert(f.t, f.value);
      }
      break;
    }
    case EventType::proximity: {
      auto batch = payloads::sighting_batch_from_json(record.payload);
      auto& times = devices_[batch.device].sightings;
      for (const auto& s : batch.sightings) {
        copresence_.insert(
            {social::epoch_of(s.t), social::DevicePair::of(s.observer, s.seen)});
        times.insert(std::upper_bound(times.begin(), times.end(), s.t), s.t);
      }
      break;
    }
    case EventType::selfreport: {
      auto r = payloads::selfreport_from_json(record.payload);
      selfreports_[r.child].push_back({record.seq, r.child, r.t, r.emotion});
      break;
    }
    case EventType::annotation: {
      auto a = payloads::annotation_from_json(record.payload);
      annotations_[a.cue_key].push_back({"a" + std::to_string(record.seq), record.seq, a.cue_key,
                                         a.teacher, a.text, record.t_recv});
      break;
    }
    case EventType::message: {
      auto m = payloads::message_from_json(record.payload);
      auto& thread = messages_[m.child];
      Message msg{"m" + std::to_string(record.seq), record.seq, m.child, m.sender_role, m.text,
                  record.t_recv};
      // seq only grows, so ordering by (t, seq) means inserting after every t <= msg.t
      auto pos = std::upper_bound(thread.begin(), thread.end(), msg.t,
                                  [](Timestamp t, const Message& x) { return t < x.t; });
      thread.insert(pos, std::move(msg));
      break;
    }
  }
  head_ = record.seq;
}

const DeviceData* DerivedState::device(std::string_view id) const {
  auto it = devices_.find(id);
  return it == devices_.end() ? nullptr : &it->second;
}

std::vector<StoredSelfReport> DerivedState::selfreports(std::string_view child) const {
  auto it = selfreports_.find(child);
  return it == selfreports_.end() ? std::vector<StoredSelfReport>{} : it->second;
}

std::vector<Annotation> DerivedState::annotations(std::string_view cue_key) const {
  auto it = annotations_.find(cue_key);
  return it == annotations_.end() ? std::vector<Annotation>{} : it->second;
}

std::span<const Message> DerivedState::messages(std::string_view child) const {
  auto it = messages_.find(child);
  if (it == messages_.end()) return {};
  return it->second;
}

}  // namespace senseme
