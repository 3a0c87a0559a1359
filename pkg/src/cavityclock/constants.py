"""Physical constants (SI)."""

C = 299_792_458.0            # speed of light, m/s
G_NEWTON = 6.674_30e-11      # gravitational constant, m^3 kg^-1 s^-2
