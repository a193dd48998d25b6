#include "bdpc/energy.hpp"

namespace bdpc {

double lifetimeYears(const EnergyMeter& meter, const ChargeTable& table,
                     double slotDurationS) {
  std::uint64_t slots = meter.totalSlots();
  if (slots == 0) return 0.0;
  double elapsedS = static_cast<double>(slots) * slotDurationS;
  double averageCurrentUa = meter.totalChargeUc(table) / elapsedS;
  if (averageCurrentUa <= 0.0) return 0.0;
  double batteryUc = table.batteryMah * 3600.0 * 1000.0;  // mAh to microcoulombs
  double lifetimeS = batteryUc / averageCurrentUa;
  return lifetimeS / (365.25 * 24.0 * 3600.0);
}

}  // namespace bdpc
