"""Verification report types shared by every command."""
