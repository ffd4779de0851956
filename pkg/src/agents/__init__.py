"""Validation checkers run as nodes of the LangGraph workflow."""
