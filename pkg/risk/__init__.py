"""Admission control"""
from .admission_control import AdmissionController, AdmissionDecision, polling_admission

__all__ = [
    'AdmissionController',
    'AdmissionDecision',
    'polling_admission',
]
