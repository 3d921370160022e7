"""Tour of the array-geometry layer: spacing rules and steering vectors.

Run with: python3 demos/steering_and_geometry.py
"""

import numpy as np

from wbbeam import (
    SPEED_OF_LIGHT,
    ArrayGeometry,
    half_wavelength_spacing,
    steering_matrix,
    steering_vector,
)

# A wideband design pins the element spacing to half a wavelength at the
# HIGHEST frequency so that no frequency in the band spatially aliases.
band_lo, band_hi = 3.50e9, 3.60e9
spacing = half_wavelength_spacing(band_hi)
print(f"half-wavelength spacing at {band_hi / 1e9:.2f} GHz: {spacing * 100:.3f} cm")

geom = ArrayGeometry(num_sensors=8, spacing_m=spacing)
print(f"geometry: {geom.num_sensors} sensors, aperture {(geom.num_sensors - 1) * spacing:.3f} m")

# The steering vector collects the per-sensor phase of a plane wave. At
# broadside every sensor sees the wavefront simultaneously, so all entries
# are exactly one.
print("\nbroadside steering vector at 3.55 GHz:")
print(steering_vector(geom, 0.0, 3.55e9).entries)

# Away from broadside the phase advances linearly along the array: entry n is
# exp(-i 2 pi f n d sin(theta) / c).
theta = np.radians(40.0)
sv = steering_vector(geom, theta, 3.55e9)
phase_step_deg = np.degrees(np.angle(sv.entries[1]))
print(f"\nsteering at 40 deg / 3.55 GHz, per-element phase step {phase_step_deg:.2f} deg:")
print(np.round(sv.entries, 4))

# The same look direction maps to different phase ramps at different
# frequencies. That frequency dependence is exactly why a single set of
# narrowband weights cannot stay matched across a wide band.
freqs = np.array([band_lo, 3.55e9, band_hi])
columns = steering_matrix(geom, theta, freqs)
inner = np.abs(columns.conj().T @ columns) / geom.num_sensors
print("\nnormalized inner products between band-edge and center steering vectors:")
for i, fi in enumerate(freqs):
    row = " ".join(f"{inner[i, j]:.4f}" for j in range(len(freqs)))
    print(f"  {fi / 1e9:.2f} GHz: {row}")
print(
    "\nEven across a 2.8% fractional band the vectors decorrelate measurably, "
    "and the mismatch grows with aperture."
)

# Sanity check against the continuous-wave picture: doubling the frequency
# squares each entry (phases double).
doubled = steering_vector(geom, theta, 2 * 3.55e9).entries
print(
    "\nfrequency doubling squares the entries:",
    np.max(np.abs(doubled - sv.entries**2)) < 1e-12,
)
print(f"speed of light used throughout: {SPEED_OF_LIGHT:.6g} m/s")
