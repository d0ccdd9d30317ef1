Object.prototype = { polluted: true };
console.log("pollution succeeded");
