package java.lang;

/**
 * Stand-in for the platform root class so the corpus has a single
 * inheritance root.
 */
public class Object {
    public Object() {
    }

    public boolean equals(Object other) {
        return this == other;
    }

    public int hashCode() {
        return 0;
    }

    public String toString() {
        return "Object{}";
    }
}
