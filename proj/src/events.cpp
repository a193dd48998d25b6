#include "bdpc/events.hpp"

#include <fstream>

namespace bdpc {

const char* eventTypeName(EventType t) {
  switch (t) {
    case EventType::PacketGenerated: return "packet_generated";
    case EventType::PacketHop: return "packet_hop";
    case EventType::PacketAtRoot: return "packet_at_root";
    case EventType::QueueDrop: return "queue_drop";
    case EventType::RetryDrop: return "retry_drop";
    case EventType::DioSent: return "dio_sent";
    case EventType::DioReceived: return "dio_received";
    case EventType::SharedCollision: return "shared_collision";
    case EventType::Joined: return "joined";
    case EventType::ParentChanged: return "parent_changed";
    case EventType::DelayToRootUpdated: return "delay_to_root_updated";
    case EventType::SixpComplete: return "sixp_complete";
    case EventType::SixpFailed: return "sixp_failed";
    case EventType::SixpBusy: return "sixp_busy";
    case EventType::SixpNoFreeCells: return "sixp_no_free_cells";
    case EventType::CellInstalled: return "cell_installed";
    case EventType::CellRemoved: return "cell_removed";
    case EventType::MsfDecision: return "msf_decision";
    case EventType::BdpcDecision: return "bdpc_decision";
  }
  return "unknown";
}

void EventLog::writeCsv(const std::string& path) const {
  std::ofstream out(path);
  out << "type,asn,node,details\n";
  for (const Event& e : events_) {
    out << eventTypeName(e.type) << ',' << e.asn << ',' << e.node << ',' << e.details
        << '\n';
  }
}

}  // namespace bdpc
