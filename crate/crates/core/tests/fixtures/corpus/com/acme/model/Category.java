package com.acme.model;

public enum Category {
    BOOKS("Books"),
    MUSIC("Music"),
    GAMES("Games"),
    GARDEN("Garden"),
    TOOLS("Tools"),
    OTHER("Other");

    private final String label;

    Category(String label) {
        this.label = label;
    }

    public String label() {
        return label;
    }

    public static Category parse(String text) {
        for (Category c : values()) {
            if (c.label.equalsIgnoreCase(text)) {
                return c;
            }
        }
        return OTHER;
    }
}
