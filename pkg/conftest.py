# Makes the robustkz package importable when pytest runs from a source checkout
