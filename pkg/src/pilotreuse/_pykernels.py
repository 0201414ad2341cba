"""Pure numpy implementation of the per-trial rate kernel (fallback)."""
import numpy as np

_SHIFTS = np.array([(i, j) for i in (-1, 0, 1) for j in (-1, 0, 1)], dtype=float)


def trial_rates(home, interf, centers, period, period_inv, gamma, power_control=False):
    """Asymptotic rate of the home user for each trial.

    Parameters
    ----------
    home : ndarray, shape (n, 2)
        Home-user offsets from the home BS (unit cell radius).
    interf : ndarray, shape (n, g, 2)
        Interfering-user offsets from their own cell centers.
    centers : ndarray, shape (g, 2)
        Interfering cell centers relative to the home BS.
    period, period_inv : ndarray, shape (2, 2)
        Torus period basis (columns) and its inverse.
    gamma : float
        Path-loss exponent.
    power_control : bool
        Statistical channel inversion: every user's gain towards its own BS
        is normalized to one, so an interferer contributes
        ``(d_own / d_home_bs) ** gamma`` instead of ``d_home_bs ** -gamma``.

    Returns
    -------
    ndarray, shape (n,)
    """
    home = np.asarray(home, dtype=float)
    pos = np.asarray(interf, dtype=float) + np.asarray(centers, dtype=float)[None, :, :]
    coef = pos @ period_inv.T
    coef -= np.rint(coef)
    base = coef @ period.T
    images = base[:, :, None, :] + (_SHIFTS @ period.T)[None, None, :, :]
    d2 = np.min(images[..., 0] ** 2 + images[..., 1] ** 2, axis=-1)
    if power_control:
        u = np.asarray(interf, dtype=float)
        own2 = u[..., 0] ** 2 + u[..., 1] ** 2
        return np.log2(1.0 + 1.0 / np.sum((own2 / d2) ** gamma, axis=1))
    interference = np.sum(d2 ** (-gamma), axis=1)
    h2 = home[:, 0] ** 2 + home[:, 1] ** 2
    return np.log2(1.0 + h2 ** (-gamma) / interference)
