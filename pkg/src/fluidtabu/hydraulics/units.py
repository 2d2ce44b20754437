"""Unit conversions between catalogue units and SI."""

import math

CC_PER_REV_TO_M3_PER_RAD = 1e-6 / (2.0 * math.pi)
RPM_TO_RAD_PER_S = 2.0 * math.pi / 60.0
BAR_TO_PA = 1e5
LPM_TO_M3_PER_S = 1e-3 / 60.0
MM_TO_M = 1e-3


def cc_rev_to_m3_rad(d):
    return d * CC_PER_REV_TO_M3_PER_RAD


def m3_rad_to_cc_rev(d):
    return d / CC_PER_REV_TO_M3_PER_RAD


def rpm_to_rad_s(w):
    return w * RPM_TO_RAD_PER_S


def rad_s_to_rpm(w):
    return w / RPM_TO_RAD_PER_S


def bar_to_pa(p):
    return p * BAR_TO_PA


def pa_to_bar(p):
    return p / BAR_TO_PA


def lpm_to_m3_s(q):
    return q * LPM_TO_M3_PER_S


def m3_s_to_lpm(q):
    return q / LPM_TO_M3_PER_S
